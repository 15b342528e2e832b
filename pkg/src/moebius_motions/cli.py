"""Command line front end.

Exit codes: 0 success, 1 a tolerance check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import geodesic_engine as ge
from . import io as mio
from . import motion_energy as me
from . import validation
from .kinetic_metric import ProductTangent, QuadratureRule, closed_form_gram, gram_matrix
from .plotting import plot_motion, plot_path
from .product_geometry import F_coords, ProductPoint

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2
METRIC_TOL = 1e-10


class UsageError(Exception):
    pass


def cmd_metric(args) -> int:
    r = args.r
    if not 0.0 < r < 1.0:
        raise UsageError(f"--r must lie in (0, 1), got {r}")
    quad = QuadratureRule(args.nodes)
    gram = gram_matrix(F_coords(0.0, r, 0.0), quad)
    target = closed_form_gram(r)
    err = float(np.max(np.abs(gram - target)))
    ok = err < METRIC_TOL
    if args.format == "json":
        print(json.dumps({
            "r": r, "nodes": args.nodes, "gram": gram.tolist(), "target": target.tolist(),
            "max_error": err, "tolerance": METRIC_TOL, "passed": ok,
        }, indent=1))
    else:
        np.set_printoptions(precision=12, suppress=False)
        print(f"quadrature Gram matrix at (1, {r}) with {args.nodes} nodes:")
        print(gram)
        print("closed form diag(1, 2/(1-r^2), 2r^2/(1-r^2)):")
        print(np.diag(target))
        print(f"max entrywise error: {err:.3e} ({'ok' if ok else 'exceeds'} {METRIC_TOL:g})")
    if args.out:
        mio.write_gram_csv(gram, args.out)
    return EXIT_OK if ok else EXIT_TOLERANCE


def _initial_path(args) -> ge.GeodesicPath:
    c, v = args.c, args.v
    if v <= 0.0:
        raise UsageError("--v must be positive")
    if args.rho0 is not None:
        if not 0.0 <= args.rho0 < 1.0:
            raise UsageError("--rho0 must lie in [0, 1)")
        if c == 0.0:
            state = ge.GeodesicState(ProductPoint(0.0, args.rho0, args.theta0),
                                     ProductTangent(args.dt, v / math.sqrt(2.0 / (1.0 - args.rho0**2)), 0.0))
        else:
            state = ge.clairaut_state(c, v, args.rho0, args.theta0, dt=args.dt, inward=not args.outward)
        return ge.integrate(state, args.length, args.step)
    if c == 0.0:
        state = ge.GeodesicState(ProductPoint(0.0, 0.0, args.theta0), ProductTangent(args.dt, v / math.sqrt(2.0), 0.0))
        return ge.integrate(state, args.length, args.step)
    try:
        return ge.centered_clairaut_path(c, v, args.length, args.theta0, dt=args.dt, step=args.step)
    except ge.NotApplicableError:
        return ge.integrate(ge.turning_state(c, v, args.theta0, dt=args.dt), args.length, args.step)


def cmd_geodesic(args) -> int:
    if not 0.0 < args.step <= ge.MAX_STEP or args.length <= 0.0:
        raise UsageError("need 0 < --step <= 1e-3 and --length > 0")
    try:
        path = _initial_path(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.out:
        if args.format == "json":
            with open(args.out, "w") as fh:
                json.dump(mio.path_to_json(path), fh)
        else:
            mio.write_path_csv(path, args.out)
    sp, c = path.speed(), path.clairaut()
    summary = {
        "samples": len(path),
        "length": float(path.s[-1]),
        "min_rho": ge.min_rho(path),
        "turning_radius": ge.turning_radius(args.c, args.v),
        "speed_drift": float(np.max(np.abs(sp - sp[0]))),
        "clairaut_drift": float(np.max(np.abs(c - c[0]))),
        "boundary_reached": path.boundary_reached,
    }
    for key, val in summary.items():
        print(f"{key}: {val}")
    if path.boundary_reached:
        print(f"note: stopped early at s={path.s[-1]:.10f} where rho reached {ge.RHO_STOP}")
    return EXIT_OK


def cmd_validate(args) -> int:
    names = list(validation.SUITES) if args.suite == "all" else args.suite.split(",")
    cfg = validation.ValidationConfig(nodes=args.nodes, seed=args.seed)
    try:
        report = validation.run(names, cfg)
    except KeyError as exc:
        raise UsageError(f"unknown suite {exc.args[0]}; choose from all, {', '.join(validation.SUITES)}") from exc
    text = json.dumps(report, indent=1, default=float)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text)
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


def cmd_energy(args) -> int:
    try:
        motion = mio.read_motion_json(args.motion)
    except mio.FormatError as exc:
        raise UsageError(str(exc)) from exc
    quad = QuadratureRule(args.nodes)
    energies = me.energy_trace(motion, quad)
    if args.out:
        mio.write_energy_csv(motion.times, energies, args.out)
    print(f"action: {me.action(motion, quad)!r}")
    try:
        print(f"force_free_residual: {me.force_free_residual(motion, args.variations, quad, seed=args.seed)!r}")
    except ValueError as exc:
        print(f"force_free_residual: unavailable ({exc})")
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        if args.input.endswith(".json"):
            motion = mio.read_motion_json(args.input)
            plot_motion(motion.alpha, args.out)
            return EXIT_OK
        path = mio.read_path_csv(args.input)
    except (OSError, mio.FormatError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    c = path.clairaut()
    clairaut = abs(c[0]) > 1e-12
    fit = None
    if clairaut:
        try:
            fit = ge.hypocycloid_fit(path)
        except ge.IncompleteArcError:
            fit = None
    plot_path(path, args.out, fit=fit, rho_min=ge.min_rho(path) if clairaut else None)
    if fit is not None:
        print(f"hypocycloid k={fit.k:.6f} max deviation {fit.max_deviation:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moebius-motions", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="quadrature Gram matrix at (1, r) against the closed form")
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--nodes", type=int, default=256)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="optional CSV file for the Gram matrix")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("geodesic", help="integrate a geodesic of S^1 x disc")
    p.add_argument("--c", type=float, default=1.0, help="Clairaut constant (0 for a radial geodesic)")
    p.add_argument("--v", type=float, default=1.0, help="disc-factor speed")
    p.add_argument("--dt", type=float, default=0.0, help="circle-factor speed")
    p.add_argument("--rho0", type=float, default=None)
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--outward", action="store_true")
    p.add_argument("--length", type=float, default=2.0)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("validate", help="run verification suites and print a JSON report")
    p.add_argument("--suite", default="all", help="'all' or comma-separated suite names")
    p.add_argument("--nodes", type=int, default=256)
    p.add_argument("--seed", type=int, default=validation.ValidationConfig.seed)
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("energy", help="kinetic energy trace, action and criticality of a motion file")
    p.add_argument("motion")
    p.add_argument("--nodes", type=int, default=256)
    p.add_argument("--variations", type=int, default=20)
    p.add_argument("--seed", type=int, default=validation.ValidationConfig.seed)
    p.add_argument("--out")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("plot", help="SVG of a path CSV or motion JSON")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
