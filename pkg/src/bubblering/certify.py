"""Explicit low-Weber non-existence certificate.

For a normalized cross-section (|E| = 2 pi, so a = 1 and mu = R) the
admissible Weber numbers of a translating ring with nonnegative relative
vorticity obey  sqrt(We) >= u + v  with

    u = sqrt(2 b* / r_max) |S(b*)|,        b* = pi/(36 R^2)  (R > sqrt(pi)/6)
                                           b* = 1/2          (otherwise)
    v = 2 sqrt(lambda) h,                  4 lambda h^2 >= delta_+ (Bernoulli)

where |S(b)| is the length of the boundary set with n.e_r >= b, h the half
height, and delta = int r^-2 dA - 2 pi.  Squaring via (u+v)^2 >= u^2 + v^2
gives  We >= term_curvature + term_bernoulli.  Two variants are reported:

* universal: only R and delta enter; the shape-dependent quantities are
  replaced by their worst-case bounds (r_max <= 3R, |S(b*)| >= pi/(3R),
  Delta R <= 3R, pi <= h Delta R), giving
      term_curvature = 2 b* pi^2 / (27 R^3)
      term_bernoulli = 4 pi^2 delta_+ / (3R (4 pi + 18 R^2))
* measured: r_max, |S(b*)|, h, Delta R taken from the shape itself, giving
  the sharper  u^2 = 2 b* S(b*)^2 / r_max  and
  v^2 = 4 delta_+ h^2 / (4h + 2 Delta R).

The full derivation of every constant is in docs/BOUND_DERIVATION.md; the
chain-soundness property tests check each intermediate inequality on random
shapes before these constants are trusted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GeometryReport, geometry_report, width_height, surface_set_length, disk_delta
from .shapes import CrossSection, Disk

__all__ = [
    "BoundCertificate",
    "explicit_bound",
    "universal_bound",
    "verdict",
    "norbury_scaling_probe",
    "NORMALIZATION_TOL",
    "RULED_OUT",
    "NOT_RULED_OUT",
]

NORMALIZATION_TOL = 1e-10
RULED_OUT = "RuledOut"
NOT_RULED_OUT = "NotRuledOut"

_BRANCH_SPLIT = np.sqrt(np.pi) / 6.0  # b* switches at R = sqrt(pi)/6


@dataclass(frozen=True)
class BoundCertificate:
    """Explicit lower bound for the Weber number of a thick ring."""

    mu: float
    delta: float
    branch: str                     # "large-R" (R > sqrt(pi)/6) or "small-R"
    b_star: float
    term_curvature: float           # universal curvature term u^2
    term_bernoulli: float           # universal delta term v^2
    we_min: float                   # universal bound: sum of the two terms
    term_curvature_measured: float | None
    term_bernoulli_measured: float | None
    we_min_measured: float | None
    mu_area_convention: float       # mu in the R/sqrt(|E|) convention

    @property
    def best(self) -> float:
        if self.we_min_measured is None:
            return self.we_min
        return max(self.we_min, self.we_min_measured)

    def verdict(self, we: float, is_thick: bool) -> str:
        return verdict(self, we, is_thick)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "mu_area_convention": self.mu_area_convention,
            "delta": self.delta,
            "branch": self.branch,
            "b_star": self.b_star,
            "universal": {
                "term_curvature": self.term_curvature,
                "term_bernoulli": self.term_bernoulli,
                "we_min": self.we_min,
            },
            "measured": None if self.we_min_measured is None else {
                "term_curvature": self.term_curvature_measured,
                "term_bernoulli": self.term_bernoulli_measured,
                "we_min": self.we_min_measured,
            },
            "we_min_best": self.best,
        }


def _b_star(R: float) -> tuple[float, str]:
    if R > _BRANCH_SPLIT:
        return np.pi / (36.0 * R * R), "large-R"
    return 0.5, "small-R"


def universal_bound(mu: float, delta: float) -> float:
    """Shape-free lower bound from (mu, delta) alone (normalized units)."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    R = mu
    b, _ = _b_star(R)
    u2 = 2.0 * b * np.pi**2 / (27.0 * R**3)
    dplus = max(delta, 0.0)
    v2 = 4.0 * np.pi**2 * dplus / (3.0 * R * (4.0 * np.pi + 18.0 * R * R))
    return u2 + v2


def explicit_bound(report: GeometryReport,
                   shape: CrossSection | None = None) -> BoundCertificate:
    """Certificate from a normalized geometry report.

    If the originating shape is supplied, the sharper measured variant
    (actual r_max, |S(b*)|, h, Delta R) is computed as well.
    """
    if abs(report.area - 2.0 * np.pi) > NORMALIZATION_TOL:
        raise ValueError(
            f"certificate needs a normalized shape (|E| = 2 pi); "
            f"got area {report.area!r} — call geometry.normalize first")
    R = report.R
    delta = report.delta
    b, branch = _b_star(R)
    u2 = 2.0 * b * np.pi**2 / (27.0 * R**3)
    dplus = max(delta, 0.0)
    v2 = 4.0 * np.pi**2 * dplus / (3.0 * R * (4.0 * np.pi + 18.0 * R * R))

    u2m = v2m = wem = None
    if shape is not None:
        s_b = surface_set_length(shape, b)
        _, _, h, dR = width_height(shape)
        u2m = 2.0 * b * s_b**2 / report.r_max
        v2m = 4.0 * dplus * h**2 / (4.0 * h + 2.0 * dR)
        wem = u2m + v2m

    return BoundCertificate(
        mu=R,
        delta=delta,
        branch=branch,
        b_star=b,
        term_curvature=u2,
        term_bernoulli=v2,
        we_min=u2 + v2,
        term_curvature_measured=u2m,
        term_bernoulli_measured=v2m,
        we_min_measured=wem,
        mu_area_convention=R / np.sqrt(2.0 * np.pi),
    )


def verdict(cert: BoundCertificate, we: float, is_thick: bool) -> str:
    """RuledOut iff the shape is thick and we falls below the certificate."""
    if we <= 0:
        raise ValueError("Weber number must be positive")
    if is_thick and we < cert.best:
        return RULED_OUT
    return NOT_RULED_OUT


def norbury_scaling_probe(R0: float, eps_values) -> list[dict]:
    """Certificate along the near-axis disk family rho0 = R0 - eps.

    Each disk is rescaled to area 2 pi before certification.  Returns one
    row per eps with the relative offset, delta (closed form and measured),
    and the universal we_min; delta ~ pi sqrt(2) / sqrt(eps/R0) blows up as
    the ring closes onto the axis, and the bound diverges with it.
    """
    rows = []
    for eps in eps_values:
        if not 0.0 < eps < R0:
            raise ValueError("eps must lie in (0, R0)")
        rho0 = R0 - eps
        scale = np.sqrt(2.0) / rho0          # rescale so the radius is sqrt(2)
        disk = Disk(R0=R0 * scale, rho0=np.sqrt(2.0))
        delta_exact = disk_delta(R0, rho0)   # scale invariant
        mu = R0 * scale
        rows.append({
            "eps_over_R0": eps / R0,
            "delta": delta_exact,
            "delta_scaled": delta_exact * np.sqrt(eps / R0),
            "mu": mu,
            "we_min": universal_bound(mu, delta_exact),
            "shape": disk,
        })
    return rows
