"""Command-line front-end: reproducible runs with machine-readable output.

Subcommands
-----------
analyze        geometry report of a shape file (JSON)
bound          low-Weber certificate of the normalized shape (JSON)
solve          exterior stream solve + dynamic-condition residual (JSON)
search         residual minimization over a shape family (JSON + CSV log)
verify-lemmas  seeded property suites with counts and worst margins (JSON)
norbury-table  certificate scaling along the near-axis disk family (CSV)

Exit codes: 0 success, 2 validation error, 3 solver failure.  Every output
embeds the invoking config, seed, resolution and library version; identical
configs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .shapes import (InvalidShapeError, Polygon, load_shape,
                     random_convex_polygon, random_smooth_shape,
                     shape_to_dict)
from .geometry import (PhysicalParams, QuadratureError, geometry_report,
                       outer_radius_ratio, normalize, surface_set_length,
                       width_height, ellipse_inv_r2_integral)
from .solver import SolverError, dynamic_residual, solve_dirichlet
from .search import residual_minimize, family_from_name
from .certify import explicit_bound, norbury_scaling_probe, verdict

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3

_UNITS = "normalized, a=1, beta=1"


def _payload(args, report: dict, resolution) -> dict:
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "out") and v is not None}
    return {
        "config": config,
        "seed": getattr(args, "seed", None),
        "resolution": resolution,
        "version": __version__,
        "units": _UNITS,
        "report": report,
    }


def _emit(args, payload) -> None:
    if getattr(args, "format", "json") == "csv":
        text = payload  # csv commands pass preformatted text
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args):
    if args.shape is None:
        raise InvalidShapeError("this command needs --shape")
    return load_shape(args.shape)


def _normalized(shape):
    scaled, factors = normalize(shape, PhysicalParams(rho=1.0, sigma=1.0,
                                                      beta=1.0))
    return scaled, factors


def cmd_analyze(args) -> int:
    shape = _load(args)
    rep = geometry_report(shape)
    _emit(args, _payload(args, rep.to_dict(), rep.resolution))
    return EXIT_OK


def cmd_bound(args) -> int:
    shape = _load(args)
    scaled, factors = _normalized(shape)
    rep = geometry_report(scaled)
    cert = explicit_bound(rep, shape=scaled)
    out = cert.to_dict()
    out["scale_factor_a"] = factors.a
    out["is_thick"] = rep.is_thick
    if args.we is not None:
        out["we"] = args.we
        out["verdict"] = verdict(cert, args.we, rep.is_thick)
    _emit(args, _payload(args, out, rep.resolution))
    return EXIT_OK


def cmd_solve(args) -> int:
    if args.we is None:
        raise InvalidShapeError("solve needs --we")
    shape = _load(args)
    scaled, _ = _normalized(shape)
    sol = solve_dirichlet(scaled, args.w, args.resolution)
    rep = dynamic_residual(scaled, sol, args.we, args.lam)
    out = {"solution": sol.to_dict(), "residual": rep.to_dict()}
    _emit(args, _payload(args, out, sol.resolution))
    return EXIT_OK


def cmd_search(args) -> int:
    if args.we is None:
        raise InvalidShapeError("search needs --we")
    name = args.shape or "thick-disk"
    if name.startswith("family:"):
        name = name[len("family:"):]
    family = family_from_name(name)
    res = residual_minimize(family, we=args.we, budget=args.budget,
                            seed=args.seed, resolution=args.resolution)
    out = res.to_dict()
    if res.best_shape is not None:
        out["best_shape"] = shape_to_dict(res.best_shape)
    _emit(args, _payload(args, out, args.resolution))
    log_path = (args.out + ".log.csv") if args.out else None
    if log_path:
        with open(log_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(res.LOG_FIELDS))
            writer.writeheader()
            for row in res.log_rows():
                writer.writerow(row)
    return EXIT_OK


def _suite_rows(seed: int, count: int):
    rng = np.random.default_rng(seed)
    suites = []

    # ellipse closed form for the swirl-moment integral
    worst = 0.0
    for _ in range(count):
        m = rng.uniform(0.3, 2.0)
        n = rng.uniform(0.3, 2.0)
        R0 = m + rng.uniform(0.05, 3.0)
        from .shapes import Ellipse
        rep = geometry_report(Ellipse(R0=R0, m=m, n=n))
        exact = ellipse_inv_r2_integral(R0, m, n)
        worst = max(worst, abs(rep.delta + 2 * np.pi - exact) / exact)
    suites.append(("ellipse-closed-form", count, worst, worst < 1e-10))

    # total mean curvature identity: integral of H plus delta vanishes
    worst = 0.0
    for _ in range(count):
        rep = geometry_report(random_smooth_shape(rng))
        worst = max(worst, abs(rep.total_mean_curvature + rep.delta))
    suites.append(("mean-curvature-identity", count, worst, worst < 1e-8))

    # turning number of convex sections (smooth and polygonal)
    worst = 0.0
    for _ in range(count):
        shape = random_smooth_shape(rng)
        from .shapes import boundary_nodes
        bnd = boundary_nodes(shape)
        total = float(np.sum(bnd.curvature * bnd.weights))
        worst = max(worst, abs(total - 2 * np.pi))
        poly = random_convex_polygon(rng)
        pbnd = boundary_nodes(poly)
        worst = max(worst, abs(float(np.sum(pbnd.turning_angles)) - 2 * np.pi))
    suites.append(("turning-number", 2 * count, worst, worst < 1e-8))

    # outer-radius ratio bound r_max <= 3 R on convex symmetric sections
    worst = 0.0
    for _ in range(count):
        worst = max(worst, outer_radius_ratio(random_convex_polygon(rng)))
    suites.append(("outer-radius-ratio", count, worst, worst <= 3 + 1e-10))

    # proof-chain inequalities on normalized shapes
    violations = 0
    margin = np.inf
    for _ in range(count):
        shape = random_smooth_shape(rng)
        scaled, _ = _normalized(shape)
        rep = geometry_report(scaled)
        R = rep.R
        _, _, h, dR = width_height(scaled)
        b = np.pi / (36 * R * R) if R > np.sqrt(np.pi) / 6 else 0.5
        checks = [
            2 * h - 2 * np.pi / (3 * R),
            surface_set_length(scaled, b) - np.pi / (3 * R),
            2 * h + 6 * R - surface_set_length(scaled, 0.0),
            h * dR - np.pi,
            3 * R - dR,
        ]
        margin = min(margin, min(checks))
        violations += sum(c < 0 for c in checks)
    suites.append(("proof-chain", count, margin, violations == 0))

    # small-R sections have nonnegative delta
    violations = 0
    margin = np.inf
    for _ in range(count):
        rep = geometry_report(random_smooth_shape(rng))
        if 2 * np.pi * rep.R**2 <= rep.area:
            margin = min(margin, rep.delta)
            if rep.delta < -1e-10:
                violations += 1
    suites.append(("small-R-nonnegative-delta", count, margin, violations == 0))
    return suites


def cmd_verify_lemmas(args) -> int:
    suites = _suite_rows(args.seed, args.count)
    report = {
        "suites": [
            {"name": name, "cases": cases, "worst_margin": float(margin),
             "passed": bool(ok)}
            for name, cases, margin, ok in suites
        ],
        "all_passed": all(ok for *_, ok in suites),
    }
    _emit(args, _payload(args, report, None))
    return EXIT_OK if report["all_passed"] else EXIT_VALIDATION


def cmd_norbury_table(args) -> int:
    eps = [10.0 ** (-p / 2.0) for p in range(2, 9)]
    rows = norbury_scaling_probe(1.0, eps)
    buf = io.StringIO()
    buf.write(f"# version={__version__} seed={args.seed} units={_UNITS}\n")
    writer = csv.writer(buf)
    writer.writerow(["eps_over_R0", "delta", "delta_scaled", "mu", "we_min"])
    for row in rows:
        writer.writerow([f"{row[k]:.12g}" for k in
                         ("eps_over_R0", "delta", "delta_scaled", "mu",
                          "we_min")])
    args.format = "csv"
    _emit(args, buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bubblering",
        description="Geometry, stream solves and low-Weber certificates "
                    "for axisymmetric ring cross-sections.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, resolution=512):
        p.add_argument("--shape", help="shape JSON file (or family:<name>)")
        p.add_argument("--we", type=float, help="Weber number")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=200)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--resolution", type=int, default=resolution)

    p = sub.add_parser("analyze", help="geometry report")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bound", help="low-Weber certificate")
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("solve", help="stream solve + residual")
    common(p)
    p.add_argument("--w", type=float, default=0.0, help="translation speed")
    p.add_argument("--lam", type=float, default=0.0,
                   help="Lagrange multiplier in the dynamic condition")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("search", help="residual minimization over a family")
    common(p, resolution=128)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-lemmas", help="seeded property suites")
    common(p)
    p.add_argument("--count", type=int, default=25,
                   help="cases per suite")
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("norbury-table", help="near-axis scaling table")
    common(p)
    p.set_defaults(func=cmd_norbury_table)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidShapeError, QuadratureError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
