"""Geometric functionals of a cross-section.

Area, major radius R (area-averaged r), minor radius a = sqrt(area/2pi),
the thickness measure delta = int_E r^-2 - 2pi, total mean curvature of the
torus surface, the max-r / centroid ratio, surface sets S(b), the Weber
number and the normalization to area 2pi.

All area integrals are reduced to boundary integrals by the divergence
theorem (d/dr(-1/r) = 1/r^2, d/dr(r^2/2) = r), so one quadrature serves
everything: spectral trapezoid on smooth curves, exact edge formulas on
polygons.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np
from scipy.integrate import fixed_quad
from scipy.optimize import brentq

from .shapes import (
    CrossSection,
    Disk,
    Ellipse,
    InvalidShapeError,
    Polygon,
    PolygonBoundary,
    SmoothBoundary,
    boundary_nodes,
    MAX_RESOLUTION,
)

__all__ = [
    "GeometryReport",
    "PhysicalParams",
    "QuadratureError",
    "geometry_report",
    "width_height",
    "surface_set_length",
    "outer_radius_ratio",
    "weber_number",
    "normalize",
    "small_radius_delta_implication",
    "ellipse_inv_r2_integral",
    "disk_delta",
]

_DELTA_RTOL = 1e-9


class QuadratureError(RuntimeError):
    """Boundary quadrature failed to converge to the requested tolerance."""


@dataclass(frozen=True)
class GeometryReport:
    area: float
    R: float
    a: float
    mu: float
    delta: float
    total_mean_curvature: float
    r_max: float
    r_min: float
    height_h: float
    perimeter: float
    is_thick: bool
    quad_error: float
    resolution: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PhysicalParams:
    """Fluid density, surface tension coefficient and circulation."""

    rho: float
    sigma: float
    beta: float

    def __post_init__(self):
        if self.rho <= 0 or self.sigma <= 0 or self.beta <= 0:
            raise ValueError("rho, sigma and beta must all be positive")


# ---------------------------------------------------------------------------
# core boundary integrals

def _smooth_integrals(bnd: SmoothBoundary) -> dict:
    w = bnd.weights
    nr = bnd.normal_r
    area = float(np.sum(bnd.r * nr * w))
    first_moment = float(np.sum(0.5 * bnd.r**2 * nr * w))
    inv_r2 = float(np.sum(-(1.0 / bnd.r) * nr * w))
    curv = float(np.sum(bnd.curvature * w))
    azim = float(np.sum(nr / bnd.r * w))
    return {
        "area": area,
        "first_moment": first_moment,
        "inv_r2": inv_r2,
        "total_mean_curvature": curv + azim,
        "perimeter": float(np.sum(w)),
    }


def _edge_int_inv_r(r1: float, r2: float, length: float) -> float:
    """int ds / r along a straight edge with r varying linearly."""
    if abs(r2 - r1) < 1e-9 * max(r1, r2):
        rm = 0.5 * (r1 + r2)
        d = (r2 - r1) / rm
        # log(r2/r1)/(r2-r1) expanded around r1 = r2
        return length / rm * (1.0 + d * d / 12.0)
    return length * np.log(r2 / r1) / (r2 - r1)


def _polygon_integrals(bnd: PolygonBoundary) -> dict:
    v = bnd.vertices
    r1, z1 = v[:, 0], v[:, 1]
    r2, z2 = np.roll(r1, -1), np.roll(z1, -1)
    cross = r1 * z2 - r2 * z1
    area = 0.5 * float(np.sum(cross))
    # first moment int_E r dA by the exact shoelace moment formula
    first_moment = float(np.sum(cross * (r1 + r2))) / 6.0
    inv_r = np.array(
        [_edge_int_inv_r(a, b, L) for a, b, L in zip(r1, r2, bnd.edge_lengths)]
    )
    inv_r2 = float(np.sum(-bnd.edge_normal_r * inv_r))
    azim = float(np.sum(bnd.edge_normal_r * inv_r))
    curv = float(np.sum(bnd.turning_angles))
    return {
        "area": area,
        "first_moment": first_moment,
        "inv_r2": inv_r2,
        "total_mean_curvature": curv + azim,
        "perimeter": bnd.perimeter,
    }


def _extremum(fun, dfun, t_nodes, values, maximize: bool) -> float:
    """Refine a grid extremum of a smooth periodic function by root-finding
    on its derivative."""
    i = int(np.argmax(values) if maximize else np.argmin(values))
    n = t_nodes.size
    t0 = t_nodes[(i - 1) % n]
    t1 = t_nodes[(i + 1) % n]
    if t1 < t0:
        t1 += 2.0 * np.pi
    d0, d1 = dfun(t0), dfun(t1)
    if d0 == 0.0:
        return float(fun(t0))
    if d1 == 0.0 or np.sign(d0) == np.sign(d1):
        return float(values[i])
    ts = brentq(dfun, t0, t1, xtol=1e-14)
    return float(fun(ts))


def _smooth_extrema(shape) -> tuple[float, float, float]:
    """(r_max, r_min, h) of a smooth shape, refined beyond the grid."""
    if isinstance(shape, Ellipse):
        return shape.R0 + shape.m, shape.R0 - shape.m, shape.n
    t = 2.0 * np.pi * np.arange(2048) / 2048

    def r_of(tt):
        return shape.point(tt)[0]

    def z_of(tt):
        return shape.point(tt)[1]

    def dr_of(tt):
        return shape.derivs(tt)[0][0]

    def dz_of(tt):
        return shape.derivs(tt)[0][1]

    rv = r_of(t)
    zv = z_of(t)
    r_max = _extremum(r_of, dr_of, t, rv, maximize=True)
    r_min = -_extremum(
        lambda tt: -r_of(tt), lambda tt: -dr_of(tt), t, -rv, maximize=True
    )
    h = _extremum(z_of, dz_of, t, zv, maximize=True)
    return r_max, r_min, h


def _report_from_integrals(ints: dict, extrema, resolution: int,
                           quad_error: float) -> GeometryReport:
    area = ints["area"]
    R = ints["first_moment"] / area
    a = np.sqrt(area / (2.0 * np.pi))
    delta = ints["inv_r2"] - 2.0 * np.pi
    r_max, r_min, h = extrema
    return GeometryReport(
        area=area,
        R=R,
        a=float(a),
        mu=float(R / a),
        delta=delta,
        total_mean_curvature=ints["total_mean_curvature"],
        r_max=float(r_max),
        r_min=float(r_min),
        height_h=float(h),
        perimeter=ints["perimeter"],
        is_thick=bool(delta >= -1e-12),
        quad_error=quad_error,
        resolution=resolution,
    )


def geometry_report(shape: CrossSection) -> GeometryReport:
    """All scalar functionals of a cross-section.

    Smooth kinds double the node count until two successive delta values
    agree to 1e-9 relative (capped at 8192); polygons are exact.
    """
    if isinstance(shape, Polygon):
        bnd = boundary_nodes(shape)
        ints = _polygon_integrals(bnd)
        v = bnd.vertices
        extrema = (
            float(np.max(v[:, 0])),
            float(np.min(v[:, 0])),
            float(np.max(np.abs(v[:, 1]))),
        )
        return _report_from_integrals(ints, extrema, len(shape.vertices), 0.0)

    n = shape.resolution
    prev = None
    while True:
        ints = _smooth_integrals(boundary_nodes(shape, n))
        scale = max(1.0, abs(ints["inv_r2"]))
        if prev is not None:
            err = abs(ints["inv_r2"] - prev["inv_r2"]) / scale
            if err <= _DELTA_RTOL:
                break
            if 2 * n > MAX_RESOLUTION:
                if err > 1e-8:
                    raise QuadratureError(
                        f"boundary quadrature did not converge: estimated "
                        f"relative error {err:.3g} at {n} nodes"
                    )
                break
        prev = ints
        n *= 2
    err_est = abs(ints["inv_r2"] - prev["inv_r2"]) / scale if prev is not None else 0.0
    return _report_from_integrals(ints, _smooth_extrema(shape), n, err_est)


# ---------------------------------------------------------------------------
# width profile, surface sets, centroid ratio

def width_height(shape: CrossSection):
    """Width profile w(z) = r_outer(z) - r_inner(z), max height h, and
    the radial extent delta_R = r_max - r_min."""
    if isinstance(shape, Polygon):
        bnd = boundary_nodes(shape)
        v = bnd.vertices
        h = float(np.max(np.abs(v[:, 1])))
        r_max, r_min = float(np.max(v[:, 0])), float(np.min(v[:, 0]))
        zs = np.unique(np.abs(v[:, 1]))
        zs = zs[zs < h]
        widths = np.array([_polygon_width(v, zz) for zz in zs])
        return zs, widths, h, r_max - r_min

    bnd = boundary_nodes(shape)
    r_max, r_min, h = _smooth_extrema(shape)
    right = bnd.normal_r > 0
    left = ~right
    zr = bnd.z[right]
    rr = bnd.r[right]
    order = np.argsort(zr)
    zr, rr = zr[order], rr[order]
    zl = bnd.z[left]
    rl = bnd.r[left]
    order = np.argsort(zl)
    zl, rl = zl[order], rl[order]
    zs = zr[(zr > zl.min()) & (zr < zl.max())]
    widths = np.interp(zs, zr, rr) - np.interp(zs, zl, rl)
    return zs, np.maximum(widths, 0.0), h, r_max - r_min


def _polygon_width(v: np.ndarray, z: float) -> float:
    rs = []
    n = len(v)
    for i in range(n):
        (r1, z1), (r2, z2) = v[i], v[(i + 1) % n]
        if (z1 - z) * (z2 - z) <= 0 and z1 != z2:
            rs.append(r1 + (z - z1) / (z2 - z1) * (r2 - r1))
        if z1 == z:
            rs.append(r1)
    return max(rs) - min(rs) if rs else 0.0


def surface_set_length(shape: CrossSection, b: float) -> float:
    """Arc length of S(b) = {x in boundary : n(x) . e_r > b}.

    Smooth kinds locate the crossings of n_r = b in the parameter and
    integrate the speed over the resulting arcs; polygons sum the lengths
    of edges whose constant normal clears the threshold.
    """
    if not 0.0 <= b < 1.0:
        raise ValueError("threshold b must lie in [0, 1)")
    if isinstance(shape, Polygon):
        bnd = boundary_nodes(shape)
        return float(np.sum(bnd.edge_lengths[bnd.edge_normal_r > b]))

    bnd = boundary_nodes(shape, max(shape.resolution, 1024))

    def nr_minus_b(t):
        (dr, dz), _ = shape.derivs(np.asarray(t))
        return dz / np.hypot(dr, dz) - b

    def speed(t):
        (dr, dz), _ = shape.derivs(np.asarray(t))
        return np.hypot(dr, dz)

    f = bnd.normal_r - b
    n = bnd.n_nodes
    crossings = []
    for i in range(n):
        j = (i + 1) % n
        if f[i] == 0.0 or (f[i] > 0) != (f[j] > 0):
            t0, t1 = bnd.t[i], bnd.t[i] + 2.0 * np.pi / n
            if nr_minus_b(t0) == 0.0:
                crossings.append(t0)
            else:
                crossings.append(brentq(nr_minus_b, t0, t1, xtol=1e-14))
    if not crossings:
        return bnd.perimeter if f[0] > 0 else 0.0
    total = 0.0
    crossings = sorted(crossings)
    for i, t0 in enumerate(crossings):
        t1 = crossings[(i + 1) % len(crossings)]
        if t1 <= t0:
            t1 += 2.0 * np.pi
        tm = 0.5 * (t0 + t1)
        if nr_minus_b(tm % (2.0 * np.pi)) > 0:
            total += fixed_quad(speed, t0, t1, n=60)[0]
    return float(total)


def outer_radius_ratio(shape: CrossSection) -> float:
    """k = r_max / R for a compact convex cross-section; always <= 3.

    The bound is sharp for z-symmetric triangles with one side approaching
    the axis, so a small tolerance guards the assertion.
    """
    rep = geometry_report(shape)
    k = rep.r_max / rep.R
    if k > 3.0 + 1e-10:
        raise AssertionError(
            f"convexity ratio r_max/R = {k} exceeds 3; shape data inconsistent"
        )
    return float(k)


# ---------------------------------------------------------------------------
# Weber number and normalization

def weber_number(params: PhysicalParams, area: float) -> float:
    """We = sqrt(2 pi) rho beta^2 / (sigma sqrt(area))."""
    if area <= 0:
        raise ValueError("area must be positive")
    return float(
        np.sqrt(2.0 * np.pi) * params.rho * params.beta**2
        / (params.sigma * np.sqrt(area))
    )


@dataclass(frozen=True)
class NormalizationFactors:
    """Multiply physical W, gamma, lambda by these to get the hatted
    (normalized) quantities with a = 1 and beta = 1."""

    a: float
    W: float       # W_hat = W * a / beta
    gamma: float   # gamma_hat = gamma / (a beta)
    lam: float     # lambda_hat = lambda * a / sigma


def normalize(shape: CrossSection, params: PhysicalParams):
    """Rescale the shape to area 2 pi (so a = 1) and return the conversion
    factors for W, gamma and lambda.  delta and mu are scale invariant."""
    rep = geometry_report(shape)
    a = rep.a
    scaled = shape.scaled(1.0 / a)
    factors = NormalizationFactors(
        a=a,
        W=a / params.beta,
        gamma=1.0 / (a * params.beta),
        lam=a / params.sigma,
    )
    return scaled, factors


def small_radius_delta_implication(shape: CrossSection) -> bool:
    """True iff (2 pi R^2 <= area) implies (delta >= 0) on this shape.

    The implication is a theorem (double Cauchy-Schwarz), so this must
    return True for every valid shape; it exists as a test oracle.
    """
    rep = geometry_report(shape)
    hyp = 2.0 * np.pi * rep.R**2 <= rep.area
    return (not hyp) or rep.delta >= -1e-10


# ---------------------------------------------------------------------------
# closed forms used as oracles

def ellipse_inv_r2_integral(R0: float, m: float, n: float) -> float:
    """int_E r^-2 dA over the ellipse (r-R0)^2/m^2 + z^2/n^2 <= 1."""
    return 2.0 * np.pi * n / m * (R0 / np.sqrt(R0**2 - m**2) - 1.0)


def disk_delta(R0: float, rho0: float) -> float:
    """delta of the disk of radius rho0 centered at (R0, 0)."""
    return 2.0 * np.pi * (R0 / np.sqrt(R0**2 - rho0**2) - 2.0)
