"""Numerical verification suites behind ``moebius-motions validate``.

Each suite returns a list of ``Check`` records.  Tolerances and the
criticality thresholds are configuration (``ValidationConfig``), not
constants of the library modules.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import geodesic_engine as ge
from . import motion_energy as me
from .kinetic_metric import ProductTangent, QuadratureRule, closed_form_gram, gram_matrix, torus_act
from .moebius_group import apply, compose, inverse, random_map, roots_of_unity
from .product_geometry import (
    F_coords,
    ProductPoint,
    curvature_numeric,
    gaussian_curvature,
    metric_tensor,
)


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    relation: str = "<"
    detail: dict = field(default_factory=dict)


def _below(name, value, tol, **detail):
    value = float(value)
    return Check(name, value, tol, bool(value < tol), "<", detail)


def _above(name, value, tol, **detail):
    value = float(value)
    return Check(name, value, tol, bool(value > tol), ">", detail)


@dataclass
class ValidationConfig:
    nodes: int = 256
    step: float = 1e-4
    seed: int = 20120101
    group_samples: int = 1000
    group_tol: float = 1e-12
    metric_radii: tuple = (0.1, 0.3, 0.5, 0.7, 0.9)
    metric_tol: float = 1e-10
    isometry_points: int = 50
    isometry_tol: float = 1e-9
    curvature_radii: tuple = tuple(round(0.1 * k, 1) for k in range(1, 10))
    curvature_h: float = 1e-4
    curvature_tol: float = 1e-6
    curvature_order_h: float = 1e-3
    length_tol: float = 1e-8
    conservation_length: float = 2.0
    conservation_tol: float = 1e-8
    affine_tol: float = 1e-10
    turning_cs: tuple = (0.25, 0.5, 1.0, 2.0)
    turning_tol: float = 1e-6
    clairaut_match: float = 1e-6
    clairaut_reject: float = 1e-2
    energy_tol: float = 1e-8
    mass_tol: float = 1e-10
    motion_step: float = 1e-3
    variations: int = 20
    critical_below: float = 1e-5
    perturbed_above: float = 1e-2
    bump_amplitude: float = 0.01
    hypocycloid_cs: tuple = (0.5, 1.0, 2.0)
    hypocycloid_tol: float = 1e-3


# geodesic motions used by the energy and criticality suites: (c, v, dt)
MOTION_CASES = ((0.5, 1.0, 0.3), (1.0, 1.0, 0.0), (0.25, 1.0, -0.5), (2.0, 1.0, 0.1), (1.0, 0.6, 0.8))


def suite_group(cfg: ValidationConfig):
    rng = np.random.default_rng(cfg.seed)
    z = roots_of_unity(64)
    comp = inv = assoc = 0.0
    for _ in range(cfg.group_samples):
        g, h, k = (random_map(rng) for _ in range(3))
        comp = max(comp, np.max(np.abs(apply(compose(g, h), z) - apply(g, apply(h, z)))))
        inv = max(inv, np.max(np.abs(apply(compose(g, inverse(g)), z) - z)))
        inv = max(inv, np.max(np.abs(apply(inverse(g), apply(g, z)) - z)))
        lhs, rhs = compose(compose(g, h), k), compose(g, compose(h, k))
        assoc = max(assoc, np.max(np.abs(apply(lhs, z) - apply(rhs, z))))
    return [
        _below("group.compose_pointwise", comp, cfg.group_tol),
        _below("group.inverse_round_trip", inv, cfg.group_tol),
        _below("group.associativity", assoc, cfg.group_tol),
    ]


def suite_metric(cfg: ValidationConfig):
    quad = QuadratureRule(cfg.nodes)
    checks = []
    for r in cfg.metric_radii:
        err = np.max(np.abs(gram_matrix(F_coords(0.0, r, 0.0), quad) - closed_form_gram(r)))
        checks.append(_below(f"metric.gram_r={r}", err, cfg.metric_tol, r=r, nodes=cfg.nodes))
    return checks


def suite_isometry(cfg: ValidationConfig):
    quad = QuadratureRule(cfg.nodes)
    rng = np.random.default_rng(cfg.seed + 1)
    err = err_torus = 0.0
    worst = None
    for _ in range(cfg.isometry_points):
        p = ProductPoint(rng.uniform(0, 2 * math.pi), rng.uniform(0.05, 0.9), rng.uniform(0, 2 * math.pi))
        g = F_coords(p.t, p.rho, p.theta)
        gram = gram_matrix(g, quad)
        e = np.max(np.abs(gram - metric_tensor(p).as_matrix()))
        if e > err:
            err, worst = e, p.rho
        u, v = cmath.exp(1j * rng.uniform(0, 2 * math.pi)), cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        err_torus = max(err_torus, np.max(np.abs(gram_matrix(torus_act(g, u, v), quad) - gram)))
    return [
        _below("isometry.gram_vs_metric", err, cfg.isometry_tol, worst_rho=worst),
        _below("isometry.torus_invariance", err_torus, cfg.isometry_tol),
    ]


def suite_curvature(cfg: ValidationConfig):
    checks = []
    h = cfg.curvature_order_h
    for rho in cfg.curvature_radii:
        k = gaussian_curvature(rho)
        err = abs(curvature_numeric(rho, cfg.curvature_h) - k)
        checks.append(_below(f"curvature.value_rho={rho}", err, cfg.curvature_tol, exact=k))
        order = math.log2(abs(curvature_numeric(rho, h) - k) / abs(curvature_numeric(rho, h / 2) - k))
        checks.append(_below(f"curvature.order_rho={rho}", abs(order - 2.0), 0.2, order=order))
    return checks


def radial_path(step: float = 1e-4) -> ge.GeodesicPath:
    start = ge.GeodesicState(ProductPoint(0.0, 0.0, 0.0), ProductTangent(0.0, 1.0 / math.sqrt(2.0), 0.0))
    return ge.integrate_to_boundary(start, step)


def suite_incompleteness(cfg: ValidationConfig):
    path = radial_path(cfg.step)
    target = math.sqrt(2.0) * math.asin(ge.RHO_STOP)
    return [
        _below("incompleteness.radial_length", abs(path.s[-1] - target), cfg.length_tol,
               measured=float(path.s[-1]), target=target, limit=math.pi / math.sqrt(2.0)),
        _below("incompleteness.theta_constant", float(np.ptp(path.theta)), 1e-12),
    ]


def conservation_paths(cfg: ValidationConfig):
    L = cfg.conservation_length
    paths = [ge.centered_clairaut_path(c, 1.0, L, dt=dt, step=cfg.step)
             for c, dt in ((0.25, 0.3), (0.5, -0.7), (1.0, 0.0), (2.0, 1.0))]
    # near-origin crossing exercises the Cartesian chart
    paths.append(ge.centered_clairaut_path(0.01, 1.0, L, dt=0.2, step=cfg.step))
    return paths


def suite_conservation(cfg: ValidationConfig):
    speed = clair = affine = 0.0
    for p in conservation_paths(cfg):
        sp, c = p.speed(), p.clairaut()
        speed = max(speed, np.max(np.abs(sp - sp[0])))
        clair = max(clair, np.max(np.abs(c - c[0])))
        affine = max(affine, np.max(np.abs(p.t - p.t[0] - p.dt[0] * p.s)))
    return [
        _below("conservation.speed_drift", speed, cfg.conservation_tol),
        _below("conservation.clairaut_drift", clair, cfg.conservation_tol),
        _below("conservation.circle_affine", affine, cfg.affine_tol),
    ]


def suite_turning(cfg: ValidationConfig):
    checks = []
    for c in cfg.turning_cs:
        start = ge.clairaut_state(c, 1.0, (ge.turning_radius(c, 1.0) + 1.0) / 2.0)
        path = ge.integrate(start, 2.0, cfg.step)
        target = c / math.sqrt(2.0 + c * c)
        checks.append(_below(f"turning.c={c}", abs(ge.min_rho(path) - target), cfg.turning_tol,
                             measured=ge.min_rho(path), target=target))
    return checks


def suite_clairaut(cfg: ValidationConfig):
    checks = []
    for c in cfg.turning_cs:
        path = ge.centered_clairaut_path(c, 1.0, 2.0, step=cfg.step)
        report = ge.adjudicate(path, cfg.clairaut_match, cfg.clairaut_reject)
        std = report["fits"]["standard"]
        checks.append(Check(f"clairaut.adjudication_c={c}", 1.0 if report["decisive"] else 0.0, 1.0,
                            report["decisive"], "==", {"verdict": report["verdict"], **report["fits"]}))
        checks.append(_below(f"clairaut.lambda_c={c}", abs(std["constant"] - 1.0 / c**2), 1e-6,
                             fitted=std["constant"], expected=1.0 / c**2))
    return checks


def _motions(cfg: ValidationConfig):
    every = round(cfg.motion_step / cfg.step)
    return [me.geodesic_motion(ge.centered_clairaut_path(c, v, 1.0, dt=dt, step=cfg.step), every)
            for c, v, dt in MOTION_CASES]


def suite_energy(cfg: ValidationConfig):
    quad = QuadratureRule(cfg.nodes)
    lag = metric = mass = 0.0
    for m in _motions(cfg):
        for i in range(2, len(m) - 2, 50):
            e = me.kinetic_energy(m, i, quad)
            lag = max(lag, abs(e - me.kinetic_energy_lagrangian(m, i, quad)))
            metric = max(metric, abs(e - math.pi * me.metric_speed_squared(m, i, quad)))
            mass = max(mass, abs(me.total_mass(m.maps[i], quad) - 2.0 * math.pi))
    rot = me.rotation_motion(np.linspace(0.0, 1.0, 1001))
    rot_err = np.max(np.abs(me.energy_trace(rot, quad) - math.pi))
    return [
        _below("energy.eulerian_vs_lagrangian", lag, cfg.energy_tol),
        _below("energy.pi_speed_squared", metric, cfg.energy_tol),
        _below("energy.total_mass", mass, cfg.mass_tol),
        _below("energy.rotation_is_pi", rot_err, cfg.energy_tol),
    ]


def suite_forcefree(cfg: ValidationConfig):
    quad = QuadratureRule(cfg.nodes)
    crit = 0.0
    pert = math.inf
    for j, m in enumerate(_motions(cfg)):
        crit = max(crit, me.force_free_residual(m, cfg.variations, quad, seed=cfg.seed + j))
        bumped = me.perturb(m, cfg.bump_amplitude)
        pert = min(pert, me.force_free_residual(bumped, cfg.variations, quad, seed=cfg.seed + j))
    return [
        _below("forcefree.geodesic_residual", crit, cfg.critical_below),
        _above("forcefree.perturbed_residual", pert, cfg.perturbed_above),
    ]


def suite_hypocycloid(cfg: ValidationConfig):
    checks = []
    for c in cfg.hypocycloid_cs:
        try:
            fit = ge.hypocycloid_fit(ge.full_arc(c, 1.0, step=cfg.step))
        except ValueError as exc:
            checks.append(Check(f"hypocycloid.c={c}", math.nan, cfg.hypocycloid_tol, False, "<", {"error": str(exc)}))
            continue
        checks.append(_below(f"hypocycloid.c={c}", fit.max_deviation, cfg.hypocycloid_tol, k=fit.k, rho_min=fit.rho_min))
    return checks


SUITES = {
    "group": suite_group,
    "metric": suite_metric,
    "isometry": suite_isometry,
    "curvature": suite_curvature,
    "incompleteness": suite_incompleteness,
    "conservation": suite_conservation,
    "turning": suite_turning,
    "clairaut": suite_clairaut,
    "energy": suite_energy,
    "forcefree": suite_forcefree,
    "hypocycloid": suite_hypocycloid,
}


def run(names, cfg: ValidationConfig | None = None) -> dict:
    cfg = cfg or ValidationConfig()
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(", ".join(unknown))
    checks = [c for n in names for c in SUITES[n](cfg)]
    return {
        "schema": "moebius-motions/validation v1",
        "seed": cfg.seed,
        "suites": list(names),
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
