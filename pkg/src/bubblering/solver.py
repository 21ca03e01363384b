"""Nystrom solver for the exterior axisymmetric stream-function problem.

The stream function is represented as a single layer over the boundary,

    psi(x) = int_bdry G(y, x) phi(y) ds(y),

with the ring kernel G.  The Dirichlet data is psi = W r^2/2 + gamma on the
boundary, with the flux constant gamma an extra unknown fixed by the
circulation normalization  int (1/r) dpsi/dn ds = -1  (beta = 1, a = 1).

Discretization: uniform parameter grid, trapezoidal rule for the smooth
kernel part, and the spectral quadrature of Martensen/Kussmaul type for the
logarithmic part ln(4 sin^2((t - tau)/2)); the normal derivative follows
from the conormal jump relation of the single layer, with the principal
value handled by the same splitting.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .kernel import kernel_split, gradient_split, ring_kernel
from .shapes import CrossSection, Polygon, SmoothBoundary, boundary_nodes

__all__ = [
    "SolverError",
    "BoundarySolution",
    "ResidualReport",
    "solve_dirichlet",
    "dynamic_residual",
    "evaluate_stream",
    "log_quadrature_weights",
    "SOLVER_TOL",
]

SOLVER_TOL = 1e-8
MAX_CONDITION = 1e12


class SolverError(RuntimeError):
    """Boundary-integral solve failed (conditioning or convergence)."""


@dataclass
class BoundarySolution:
    """Single-layer density and boundary traces of one solve."""

    shape: CrossSection
    boundary: SmoothBoundary
    density: np.ndarray
    psi_trace: np.ndarray
    dn_psi: np.ndarray       # exterior normal derivative of psi at the nodes
    W: float
    gamma: float
    circulation: float       # -int (1/r) dpsi/dn ds, target 1
    condition_number: float
    resolution: int

    def to_dict(self) -> dict:
        return {
            "W": self.W,
            "gamma": self.gamma,
            "circulation": self.circulation,
            "condition_number": self.condition_number,
            "resolution": self.resolution,
            "density": self.density.tolist(),
            "psi_trace": self.psi_trace.tolist(),
            "dn_psi": self.dn_psi.tolist(),
        }


@dataclass
class ResidualReport:
    """Defect of the dynamic boundary condition
    2H + lambda = We ((1/r) dpsi/dn - W n.e_r)^2."""

    dyn_residual_l2: float
    dyn_residual_max: float
    identity_gap: float          # |integral of the pointwise defect|
    identity_gap_rel: float      # same, relative to the total-H scale
    max_principle_violation: float
    lam: float
    we: float

    def to_dict(self) -> dict:
        return asdict(self)


def log_quadrature_weights(n_nodes: int) -> np.ndarray:
    """Weights R_d, d = |i - j|, of the spectral rule

        int_0^2pi ln(4 sin^2((t_i - s)/2)) f(s) ds ~ sum_j R_|i-j| f(t_j)

    on the uniform grid t_j = 2 pi j / n (n even)."""
    if n_nodes % 2:
        raise ValueError("node count must be even")
    half = n_nodes // 2
    j = np.arange(n_nodes)
    t = 2.0 * np.pi * j / n_nodes
    m = np.arange(1, half)
    R = -(4.0 * np.pi / n_nodes) * (
        np.cos(np.outer(t, m)) @ (1.0 / m) + ((-1.0) ** j) / (2.0 * half)
    )
    return R


def _pairwise(bnd: SmoothBoundary):
    r = bnd.r[:, None]
    z = bnd.z[:, None]
    rb = bnd.r[None, :]
    zb = bnd.z[None, :]
    return r, z, rb, zb


def _log_factor(bnd: SmoothBoundary, q: np.ndarray) -> np.ndarray:
    """ln(q / (4 sin^2((t_i - t_j)/2))) with its diagonal limit
    ln(speed^2 / (4 r^2))."""
    n = bnd.n_nodes
    dt = bnd.t[:, None] - bnd.t[None, :]
    s2 = 4.0 * np.sin(0.5 * dt) ** 2
    np.fill_diagonal(s2, 1.0)
    ratio = q / s2
    np.fill_diagonal(ratio, bnd.speed**2 / (4.0 * bnd.r**2))
    return np.log(ratio)


def single_layer_matrix(bnd: SmoothBoundary) -> np.ndarray:
    """Matrix mapping nodal densities to psi at the nodes."""
    n = bnd.n_nodes
    r, z, rb, zb = _pairwise(bnd)
    k, q, FL, Freg, pref = kernel_split(r, z, rb, zb)
    lnfac = _log_factor(bnd, q)
    M1 = -pref * FL
    M2 = pref * (Freg - FL * lnfac)
    # diagonal: k = 1, q = 0 limits (FL -> 1/2, Freg -> ln 4 - 2)
    np.fill_diagonal(M1, -bnd.r / (4.0 * np.pi))
    diag2 = bnd.r / (2.0 * np.pi) * (
        (np.log(4.0) - 2.0) - 0.5 * np.log(bnd.speed**2 / (4.0 * bnd.r**2))
    )
    np.fill_diagonal(M2, diag2)
    R = log_quadrature_weights(n)
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    return (R[idx] * M1 + (2.0 * np.pi / n) * M2) * bnd.speed[None, :]


def normal_derivative_matrix(bnd: SmoothBoundary) -> np.ndarray:
    """Matrix for the principal-value part of dpsi/dn on the exterior side;
    the full exterior derivative is  -r phi / 2 + (this matrix) phi."""
    n = bnd.n_nodes
    r, z, rb, zb = _pairwise(bnd)
    nr = bnd.normal_r[:, None]
    nz = bnd.normal_z[:, None]
    kap = np.broadcast_to(bnd.curvature[:, None], (n, n))
    q, rho2, AL, Areg = gradient_split(r, z, rb, zb, nr, nz, kappa_diag=kap)
    lnfac = _log_factor(bnd, q)
    A1 = -AL
    A2 = Areg - AL * lnfac
    R = log_quadrature_weights(n)
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    return (R[idx] * A1 + (2.0 * np.pi / n) * A2) * bnd.speed[None, :]


def _first_kind_solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SolverError(f"boundary system ill-conditioned: cond = {cond:.3g}")
    return np.linalg.solve(mat, rhs), cond


def solve_first_kind(shape: CrossSection, dirichlet_values, resolution=None):
    """Density of the single layer matching given Dirichlet boundary values.

    Building block for manufactured-solution tests; no flux constant, no
    circulation normalization.
    """
    bnd = _smooth_or_raise(shape, resolution)
    S = single_layer_matrix(bnd)
    phi, cond = _first_kind_solve(S, np.asarray(dirichlet_values, dtype=float))
    return phi, bnd, cond


def _smooth_or_raise(shape, resolution) -> SmoothBoundary:
    if isinstance(shape, Polygon):
        raise SolverError("the stream solver needs a smooth boundary; "
                          "polygons carry no pointwise curvature")
    return boundary_nodes(shape, resolution or shape.resolution)


def solve_dirichlet(shape: CrossSection, W: float,
                    resolution: int | None = None) -> BoundarySolution:
    """Solve the exterior problem with data W r^2/2 + gamma on the boundary.

    gamma is determined jointly with the density by appending the discrete
    circulation constraint  sum w_i (1/r_i) dpsi/dn_i = -1, evaluated by
    the same jump-relation quadrature that reports dn_psi.
    """
    if not np.isfinite(W):
        raise ValueError("translation speed W must be finite")
    bnd = _smooth_or_raise(shape, resolution)
    n = bnd.n_nodes
    S = single_layer_matrix(bnd)
    A = normal_derivative_matrix(bnd)

    # (1/r) dpsi/dn = -phi/2 + (1/r) A phi; circulation row in phi:
    circ_row = -0.5 * bnd.weights + (bnd.weights / bnd.r) @ A

    sys = np.zeros((n + 1, n + 1))
    sys[:n, :n] = S
    sys[:n, n] = -1.0
    sys[n, :n] = circ_row
    rhs = np.zeros(n + 1)
    rhs[:n] = 0.5 * W * bnd.r**2
    rhs[n] = -1.0
    sol, cond = _first_kind_solve(sys, rhs)
    phi = sol[:n]
    gamma = sol[n]

    dn_psi = -bnd.r * phi / 2.0 + A @ phi
    circulation = -float(np.sum(bnd.weights / bnd.r * dn_psi))
    psi_trace = S @ phi
    return BoundarySolution(
        shape=shape, boundary=bnd, density=phi, psi_trace=psi_trace,
        dn_psi=dn_psi, W=float(W), gamma=float(gamma),
        circulation=circulation, condition_number=float(cond),
        resolution=n,
    )


def evaluate_stream(sol_or_density, bnd: SmoothBoundary | None = None,
                    points=None):
    """psi at off-boundary points from a nodal density (plain trapezoid)."""
    if isinstance(sol_or_density, BoundarySolution):
        phi = sol_or_density.density
        bnd = sol_or_density.boundary
    else:
        phi = np.asarray(sol_or_density, dtype=float)
    pr, pz = points
    pr = np.atleast_1d(np.asarray(pr, dtype=float))
    pz = np.atleast_1d(np.asarray(pz, dtype=float))
    out = np.empty(pr.shape)
    for i, (rr, zz) in enumerate(zip(pr, pz)):
        vals = ring_kernel((bnd.r, bnd.z), (np.full(bnd.n_nodes, rr),
                                            np.full(bnd.n_nodes, zz)))
        out[i] = np.sum(vals * phi * bnd.weights)
    return out if out.size > 1 else float(out[0])


def dynamic_residual(shape: CrossSection, sol: BoundarySolution,
                     we: float, lam: float) -> ResidualReport:
    """Measure the defect of 2H + lam - We ((1/r) dpsi/dn - W n.e_r)^2.

    Reports the L2 and sup norms of the pointwise defect, the gap of its
    boundary integral, and the integrated violation of the sign condition
    dPsi/dn <= 0 for the co-moving stream function.
    """
    if we <= 0:
        raise ValueError("Weber number must be positive")
    if isinstance(shape, Polygon):
        raise SolverError("dynamic residual needs pointwise curvature; "
                          "polygons are geometry-only")
    bnd = sol.boundary
    H = bnd.curvature + bnd.normal_r / bnd.r
    flow = sol.dn_psi / bnd.r - sol.W * bnd.normal_r
    defect = 2.0 * H + lam - we * flow**2
    w = bnd.weights
    l2 = float(np.sqrt(np.sum(defect**2 * w)))
    mx = float(np.max(np.abs(defect)))
    gap = float(abs(np.sum(defect * w)))
    scale = max(abs(float(np.sum(H * w))), 1e-30)
    dn_Psi = sol.dn_psi - sol.W * bnd.r * bnd.normal_r
    viol = float(np.sum(np.maximum(dn_Psi, 0.0) * w))
    return ResidualReport(
        dyn_residual_l2=l2,
        dyn_residual_max=mx,
        identity_gap=gap,
        identity_gap_rel=gap / scale,
        max_principle_violation=viol,
        lam=float(lam),
        we=float(we),
    )
