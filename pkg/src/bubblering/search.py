"""Derivative-free residual minimization over shape families.

The dynamic boundary condition is overdetermined: for generic shapes no
choice of (W, lambda) makes the defect vanish.  `residual_minimize` probes
how small the defect can get within a finite-dimensional family of
cross-sections, which is the numerical face of the low-Weber non-existence
phenomenon: below the certified Weber threshold the minimized residual
stays pinned above a strictly positive floor.

Families renormalize to area 2 pi before solving, so all runs live in
normalized units (a = 1, beta = 1).  Candidates outside the admissible
region (axis touched, convexity lost, lambda < 0) are scored with a smooth
penalty and never sent to the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .shapes import (CrossSection, Disk, Ellipse, FourierStar,
                     InvalidShapeError, boundary_nodes)
from .solver import (BoundarySolution, ResidualReport, SolverError,
                     solve_dirichlet, dynamic_residual, SOLVER_TOL)

__all__ = [
    "ShapeFamily",
    "ThickDiskFamily",
    "EllipseFamily",
    "FourierFamily",
    "SearchResult",
    "residual_minimize",
    "family_from_name",
    "SEARCH_RESOLUTION",
    "PENALTY_BASE",
]

SEARCH_RESOLUTION = 128
PENALTY_BASE = 1.0e6

_SQRT2 = np.sqrt(2.0)
_DISK_R0_MAX = np.sqrt(8.0 / 3.0)   # delta >= 0 for the area-2pi disk


class ShapeFamily:
    """Finite-dimensional family of normalized cross-sections.

    Subclasses define `name`, `initial` (shape parameters only) and
    `make_shape(params) -> CrossSection`, raising InvalidShapeError for
    parameters outside the admissible region.
    """

    name: str = "family"
    param_names: tuple = ()
    initial: tuple = ()
    initial_W: float = 0.0
    initial_lam: float = 1.0

    def make_shape(self, params) -> CrossSection:  # pragma: no cover
        raise NotImplementedError

    def admissibility_gap(self, params) -> float:
        """0 inside the admissible region, positive distance outside.

        Used to shape the penalty so the optimizer is steered back without
        the solver ever seeing a bad candidate."""
        try:
            self.make_shape(params)
            return 0.0
        except InvalidShapeError:
            return 1.0


class ThickDiskFamily(ShapeFamily):
    """Disks of area 2 pi (radius sqrt 2); the center radius R0 ranges over
    the thick window (sqrt 2, sqrt(8/3)]."""

    name = "thick-disk"
    param_names = ("R0",)
    initial = (1.55,)

    def make_shape(self, params) -> Disk:
        (R0,) = params
        if not _SQRT2 < R0 <= _DISK_R0_MAX:
            raise InvalidShapeError(
                f"thick-disk family needs sqrt(2) < R0 <= sqrt(8/3), got {R0}")
        return Disk(R0=float(R0), rho0=_SQRT2)

    def admissibility_gap(self, params) -> float:
        (R0,) = params
        return max(_SQRT2 - R0, 0.0) + max(R0 - _DISK_R0_MAX, 0.0)


class EllipseFamily(ShapeFamily):
    """Ellipses (R0, m, n), rescaled so the area is exactly 2 pi."""

    name = "ellipse"
    param_names = ("R0", "m", "n")
    initial = (2.0, 1.0, 1.2)

    def make_shape(self, params) -> Ellipse:
        R0, m, n = (float(p) for p in params)
        if m <= 0 or n <= 0 or R0 <= m:
            raise InvalidShapeError(
                "ellipse family needs m, n > 0 and R0 > m "
                f"(axis clearance), got {params}")
        s = np.sqrt(2.0 / (m * n))
        return Ellipse(R0=R0 * s, m=m * s, n=n * s)

    def admissibility_gap(self, params) -> float:
        R0, m, n = params
        return max(-m + 1e-3, 0.0) + max(-n + 1e-3, 0.0) + max(m - R0, 0.0)


class FourierFamily(ShapeFamily):
    """Star-shaped sections rho(t) = base + sum c_j cos(j t) around a center
    R0, rescaled to area 2 pi; parameters (R0, base, c2, c3, ...)."""

    name = "fourier"
    param_names = ("R0", "base", "c2", "c3")
    initial = (2.0, 1.0, 0.0, 0.0)

    def make_shape(self, params) -> FourierStar:
        R0, base = float(params[0]), float(params[1])
        coeffs = tuple(float(c) for c in params[2:])
        if base <= 0:
            raise InvalidShapeError(f"fourier family needs base > 0, got {base}")
        raw = FourierStar(R0=R0, base=base, coeffs=coeffs)
        boundary_nodes(raw, 64)  # validates convexity / axis clearance
        from .geometry import geometry_report
        rep = geometry_report(raw)
        s = 1.0 / rep.a
        return FourierStar(R0=R0 * s, base=base * s,
                           coeffs=tuple(c * s for c in coeffs))


_FAMILIES = {f.name: f for f in (ThickDiskFamily, EllipseFamily, FourierFamily)}


def family_from_name(name: str, **overrides) -> ShapeFamily:
    try:
        fam = _FAMILIES[name]()
    except KeyError:
        raise ValueError(f"unknown family {name!r}; "
                         f"choose from {sorted(_FAMILIES)}") from None
    for key, val in overrides.items():
        setattr(fam, key, val)
    return fam


@dataclass
class SearchResult:
    family: str
    we: float
    seed: int
    budget: int
    resolution: int
    best_params: tuple
    best_W: float
    best_lam: float
    best_residual: float
    best_shape: CrossSection | None
    best_report: ResidualReport | None
    n_evaluations: int
    log: list = field(default_factory=list)

    LOG_FIELDS = ("eval", "params", "W", "lam", "dyn_residual_l2",
                  "dyn_residual_max", "identity_gap", "penalized")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "we": self.we,
            "seed": self.seed,
            "budget": self.budget,
            "resolution": self.resolution,
            "best_params": list(self.best_params),
            "best_W": self.best_W,
            "best_lam": self.best_lam,
            "best_residual": self.best_residual,
            "n_evaluations": self.n_evaluations,
            "best_report": None if self.best_report is None
            else self.best_report.to_dict(),
        }

    def log_rows(self):
        """Rows for the CSV evaluation log."""
        for row in self.log:
            yield {
                "eval": row["eval"],
                "params": " ".join(f"{p:.12g}" for p in row["params"]),
                "W": row["W"],
                "lam": row["lam"],
                "dyn_residual_l2": row["dyn_residual_l2"],
                "dyn_residual_max": row["dyn_residual_max"],
                "identity_gap": row["identity_gap"],
                "penalized": int(row["penalized"]),
            }


def residual_minimize(family: ShapeFamily | str, we: float, budget: int,
                      seed: int = 0,
                      resolution: int = SEARCH_RESOLUTION) -> SearchResult:
    """Minimize dyn_residual_l2 over (family parameters, W, lambda >= 0).

    Nelder-Mead with a penalty-augmented objective; deterministic for fixed
    seed and budget.  budget counts objective evaluations; budget = 1
    returns the initial candidate's residual unchanged.
    """
    if isinstance(family, str):
        family = family_from_name(family)
    if we <= 0:
        raise ValueError("Weber number must be positive")
    if budget < 1:
        raise ValueError("budget must be >= 1")

    n_shape = len(family.initial)
    x0 = np.array([*family.initial, family.initial_W, family.initial_lam])

    log: list[dict] = []
    best = {"val": np.inf, "x": x0, "shape": None, "report": None}

    def objective(x):
        params = tuple(x[:n_shape])
        W, lam = float(x[-2]), float(x[-1])
        gap = family.admissibility_gap(params) + max(-lam, 0.0)
        entry = {"eval": len(log) + 1, "params": params, "W": W, "lam": lam,
                 "dyn_residual_l2": np.nan, "dyn_residual_max": np.nan,
                 "identity_gap": np.nan, "penalized": gap > 0.0}
        if gap > 0.0:
            val = PENALTY_BASE * (1.0 + gap)
        else:
            try:
                shape = family.make_shape(params)
                sol = solve_dirichlet(shape, W, resolution)
                rep = dynamic_residual(shape, sol, we, lam)
                val = rep.dyn_residual_l2
                entry.update(dyn_residual_l2=rep.dyn_residual_l2,
                             dyn_residual_max=rep.dyn_residual_max,
                             identity_gap=rep.identity_gap)
                if val < best["val"]:
                    best.update(val=val, x=np.array(x), shape=shape,
                                report=rep)
            except (InvalidShapeError, SolverError):
                entry["penalized"] = True
                val = PENALTY_BASE * 2.0
        log.append(entry)
        return val

    objective(x0)
    if budget > 1:
        rng = np.random.default_rng(seed)
        # reproducible nondegenerate initial simplex around x0
        steps = 0.05 * (1.0 + np.abs(x0)) * (1.0 + 0.1 * rng.random(x0.size))
        simplex = np.vstack([x0] + [x0 + steps[i] * np.eye(x0.size)[i]
                                    for i in range(x0.size)])
        minimize(objective, x0, method="Nelder-Mead",
                 options={"maxfev": budget - 1, "initial_simplex": simplex,
                          "xatol": 1e-10, "fatol": 1e-12})

    xb = best["x"]
    return SearchResult(
        family=family.name,
        we=float(we),
        seed=int(seed),
        budget=int(budget),
        resolution=int(resolution),
        best_params=tuple(float(p) for p in xb[:n_shape]),
        best_W=float(xb[-2]),
        best_lam=float(xb[-1]),
        best_residual=float(best["val"]),
        best_shape=best["shape"],
        best_report=best["report"],
        n_evaluations=len(log),
        log=log,
    )
