"""Geodesic flow on S^1 x disc.

The circle factor is flat, so ``t`` moves linearly.  The disc factor is
integrated with classical RK4 in polar coordinates, except within
``CARTESIAN_RADIUS`` of the origin where the polar symbols blow up and
the smooth conformal form ``2 (dx^2 + dy^2) / (1 - x^2 - y^2)`` is used.

The integration parameter ``s`` is the affine parameter of the ODE; it
equals arc length for unit-speed initial states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .kinetic_metric import DegenerateChartError, ProductTangent
from .product_geometry import E, G, ProductPoint, metric_tensor

CARTESIAN_RADIUS = 0.05
RHO_STOP = 1.0 - 1e-6
MAX_STEP = 1e-3


class NotApplicableError(ValueError):
    """The requested analysis does not apply to this kind of path."""


class IncompleteArcError(ValueError):
    """The path does not contain a full arc between two boundary approaches."""


@dataclass(frozen=True)
class GeodesicState:
    point: ProductPoint
    velocity: ProductTangent

    def __post_init__(self):
        s2 = speed_squared(self)
        if not (np.isfinite(s2) and s2 > 0.0):
            raise ValueError(f"state must have finite positive speed, got speed^2={s2}")


def speed_squared(state: GeodesicState) -> float:
    m = metric_tensor(state.point)
    v = state.velocity
    return m.g_tt * v.dt**2 + m.g_rr * v.drho**2 + m.g_thth * v.dtheta**2


def clairaut_constant(state: GeodesicState) -> float:
    """Angular momentum ``G(rho) dtheta/ds``, conserved along geodesics."""
    return G(state.point.rho) * state.velocity.dtheta


# -- chart arithmetic on plain tuples (t, a, b, dt, da, db) -------------------


def _polar_rhs(y):
    t, rho, th, dt, drho, dth = y
    s = 1.0 - rho * rho
    # christoffel(): rho/s, -rho/s, 1/(rho s)
    acc_rho = -(rho / s) * drho * drho + (rho / s) * dth * dth
    acc_th = -2.0 / (rho * s) * drho * dth
    return (dt, drho, dth, 0.0, acc_rho, acc_th)


def _cartesian_rhs(y):
    t, x, yy, dt, vx, vy = y
    s = 1.0 - x * x - yy * yy
    gx, gy = x / s, yy / s  # half the gradient of log(2 / s)
    dot = gx * vx + gy * vy
    v2 = vx * vx + vy * vy
    return (dt, vx, vy, 0.0, v2 * gx - 2.0 * dot * vx, v2 * gy - 2.0 * dot * vy)


def _to_cartesian(y):
    t, rho, th, dt, drho, dth = y
    c, s = math.cos(th), math.sin(th)
    return (t, rho * c, rho * s, dt, drho * c - rho * dth * s, drho * s + rho * dth * c)


def _to_polar(y, theta_ref):
    t, x, yy, dt, vx, vy = y
    rho = math.hypot(x, yy)
    if rho == 0.0:
        # direction of motion stands in for the undefined angle
        th = math.atan2(vy, vx) if (vx or vy) else theta_ref
        return (t, 0.0, _unwrap_near(th, theta_ref), dt, math.hypot(vx, vy), 0.0)
    th = _unwrap_near(math.atan2(yy, x), theta_ref)
    return (t, rho, th, dt, (x * vx + yy * vy) / rho, (x * vy - yy * vx) / (rho * rho))


def _unwrap_near(angle, ref):
    return ref + (angle - ref + math.pi) % (2.0 * math.pi) - math.pi


def _rk4(f, y, h):
    k1 = f(y)
    k2 = f(tuple(a + 0.5 * h * b for a, b in zip(y, k1)))
    k3 = f(tuple(a + 0.5 * h * b for a, b in zip(y, k2)))
    k4 = f(tuple(a + h * b for a, b in zip(y, k3)))
    return tuple(
        a + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
    )


def _step(y, h):
    """One RK4 step of the polar state ``y``, in the chart chosen at the start."""
    if y[1] < CARTESIAN_RADIUS:
        return _to_polar(_rk4(_cartesian_rhs, _to_cartesian(y), h), y[2])
    return _rk4(_polar_rhs, y, h)


def geodesic_rhs(state: GeodesicState) -> np.ndarray:
    """Derivative ``(dt, drho, dtheta, 0, rho'', theta'')`` of a state.

    Below ``CARTESIAN_RADIUS`` the acceleration is computed in the
    Cartesian chart and converted back, which agrees with the polar
    formula wherever both are defined.
    """
    p, v = state.point, state.velocity
    if not 0.0 <= p.rho < 1.0:
        raise ValueError("state is outside the open disc")
    y = (p.t, p.rho, p.theta, v.dt, v.drho, v.dtheta)
    if p.rho >= CARTESIAN_RADIUS:
        return np.array(_polar_rhs(y))
    if p.rho == 0.0:
        raise DegenerateChartError("polar derivative is undefined at the origin")
    cy = _to_cartesian(y)
    _, x, yy, _, vx, vy = cy
    ax, ay = _cartesian_rhs(cy)[4:]
    rho = p.rho
    rdot = (x * vx + yy * vy) / rho
    # second derivatives of rho = |z| and theta = arg z
    acc_rho = (vx * vx + vy * vy + x * ax + yy * ay) / rho - rdot * rdot / rho
    ang = x * vy - yy * vx
    acc_th = (x * ay - yy * ax) / rho**2 - 2.0 * ang * rdot / rho**3
    return np.array([v.dt, v.drho, v.dtheta, 0.0, acc_rho, acc_th])


# -- paths --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    """Samples of an integrated geodesic.

    ``t`` and ``theta`` are kept unwrapped (continuous) so that
    differences along the path are meaningful.  ``boundary_reached`` is
    set when integration stopped at ``rho = RHO_STOP``; the last sample
    then sits exactly on that circle and its parameter increment is
    shorter than ``step``.
    """

    s: np.ndarray
    t: np.ndarray
    rho: np.ndarray
    theta: np.ndarray
    dt: np.ndarray
    drho: np.ndarray
    dtheta: np.ndarray
    step: float
    boundary_reached: bool = False
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.s)

    def state(self, i: int) -> GeodesicState:
        return GeodesicState(
            ProductPoint(self.t[i], self.rho[i], self.theta[i]),
            ProductTangent(self.dt[i], self.drho[i], self.dtheta[i]),
        )

    @property
    def final_state(self) -> GeodesicState:
        return self.state(len(self) - 1)

    @property
    def disc_points(self) -> np.ndarray:
        return self.rho * np.exp(1j * self.theta)

    def speed(self) -> np.ndarray:
        # Cartesian-safe: G dtheta^2 = 2 (rho dtheta)^2 / (1 - rho^2)
        w = 1.0 - self.rho**2
        return np.sqrt(
            self.dt**2 + (2.0 * self.drho**2 + 2.0 * (self.rho * self.dtheta) ** 2) / w
        )

    def clairaut(self) -> np.ndarray:
        return G(self.rho) * self.dtheta

    def subsample(self, every: int) -> GeodesicPath:
        sl = slice(None, None, every)
        return GeodesicPath(
            self.s[sl], self.t[sl], self.rho[sl], self.theta[sl],
            self.dt[sl], self.drho[sl], self.dtheta[sl],
            self.step * every, self.boundary_reached, dict(self.meta),
        )

    def reversed(self) -> GeodesicPath:
        """The same trajectory traversed backwards, reparametrized from 0."""
        sl = slice(None, None, -1)
        return GeodesicPath(
            self.s[-1] - self.s[sl], self.t[sl], self.rho[sl], self.theta[sl],
            -self.dt[sl], -self.drho[sl], -self.dtheta[sl],
            self.step, self.boundary_reached, dict(self.meta),
        )


def integrate(state0: GeodesicState, length: float, step: float = 1e-4) -> GeodesicPath:
    """Integrate the geodesic through ``state0`` over parameter span ``length``.

    Fixed-step RK4.  Stops early, with ``boundary_reached`` set, at the
    parameter where ``rho`` first reaches ``RHO_STOP``; that crossing is
    located by root-finding on the partial step.
    """
    if not 0.0 < step <= MAX_STEP:
        raise ValueError(f"step must lie in (0, {MAX_STEP}], got {step}")
    if not length > 0.0:
        raise ValueError(f"length must be positive, got {length}")
    p, v = state0.point, state0.velocity
    y = (p.t, p.rho, p.theta, v.dt, v.drho, v.dtheta)
    nsteps = max(1, math.ceil(length / step - 1e-9))
    samples = [y]
    params = [0.0]
    hit = False
    for i in range(nsteps):
        h = step if i < nsteps - 1 else length - (nsteps - 1) * step
        y_new = _step(y, h)
        if y_new[1] >= RHO_STOP:
            tau = brentq(lambda tt: _step(y, tt)[1] - RHO_STOP, 0.0, h, xtol=1e-15, rtol=1e-15)
            samples.append(_step(y, tau))
            params.append(params[-1] + tau)
            hit = True
            break
        y = y_new
        samples.append(y)
        params.append((i + 1) * step if i < nsteps - 1 else length)
    arr = np.array(samples)
    return GeodesicPath(
        np.array(params), arr[:, 0], arr[:, 1], arr[:, 2],
        arr[:, 3], arr[:, 4], arr[:, 5], step, hit,
    )


def integrate_to_boundary(state0: GeodesicState, step: float = 1e-4, max_length: float = 20.0) -> GeodesicPath:
    path = integrate(state0, max_length, step)
    if not path.boundary_reached:
        raise NotApplicableError("geodesic did not reach the boundary within max_length")
    return path


def reverse_state(state: GeodesicState) -> GeodesicState:
    v = state.velocity
    return GeodesicState(state.point, ProductTangent(-v.dt, -v.drho, -v.dtheta))


# -- Clairaut geodesics -------------------------------------------------------


def turning_radius(c: float, v: float) -> float:
    """Minimum ``rho`` of a disc geodesic with momentum ``c`` and disc speed ``v``.

    Solves ``G(rho) v^2 = c^2``.
    """
    return abs(c) / math.sqrt(2.0 * v * v + c * c)


def clairaut_state(c: float, v: float, rho: float, theta: float = 0.0, *,
                   t: float = 0.0, dt: float = 0.0, inward: bool = True) -> GeodesicState:
    """State at radius ``rho`` with momentum ``c`` and disc-factor speed ``v``."""
    g = G(rho)
    radial2 = (v * v - c * c / g) / E(rho) if g > 0.0 else float("nan")
    if radial2 < -1e-14 or not np.isfinite(radial2):
        raise ValueError(f"rho={rho} is inside the turning radius {turning_radius(c, v)}")
    drho = math.sqrt(max(radial2, 0.0))
    return GeodesicState(
        ProductPoint(t, rho, theta),
        ProductTangent(dt, -drho if inward else drho, c / g),
    )


def turning_state(c: float, v: float, theta: float = 0.0, *, t: float = 0.0, dt: float = 0.0) -> GeodesicState:
    rmin = turning_radius(c, v)
    return GeodesicState(ProductPoint(t, rmin, theta), ProductTangent(dt, 0.0, c / G(rmin)))


def full_arc(c: float, v: float, theta: float = 0.0, step: float = 1e-4) -> GeodesicPath:
    """The whole Clairaut arc from boundary to boundary through the turning point."""
    back = integrate_to_boundary(reverse_state(turning_state(c, v, theta)), step)
    path = integrate_to_boundary(reverse_state(back.final_state), step)
    path.meta.update(c=c, v=v)
    return path


def centered_clairaut_path(c: float, v: float, length: float, theta: float = 0.0, *,
                           dt: float = 0.0, step: float = 1e-4) -> GeodesicPath:
    """Clairaut geodesic of parameter span ``length`` whose midpoint is the turning point."""
    back = integrate(reverse_state(turning_state(c, v, theta, dt=dt)), length / 2.0, step)
    if back.boundary_reached:
        raise NotApplicableError(f"arc with c={c}, v={v} is shorter than {length}")
    path = integrate(reverse_state(back.final_state), length, step)
    path.meta.update(c=c, v=v)
    return path


def min_rho(path: GeodesicPath) -> float:
    """Minimum radius along the path, refined by a parabola through the lowest samples."""
    i = int(np.argmin(path.rho))
    if 0 < i < len(path) - 1:
        r0, r1, r2 = path.rho[i - 1], path.rho[i], path.rho[i + 1]
        denom = r0 - 2.0 * r1 + r2
        if denom > 0.0:
            return float(r1 - (r2 - r0) ** 2 / (8.0 * denom))
    return float(path.rho[i])


# -- trajectory equation adjudication -----------------------------------------

FORMS = ("interchanged", "standard")


@dataclass(frozen=True)
class TrajectoryFit:
    form: str
    constant: float
    max_residual: float


def _drho_dtheta(path: GeodesicPath):
    """Centered five-point derivative of rho with respect to theta.

    The theta grid is nonuniform, so the stencil weights are obtained per
    sample from the Taylor (Vandermonde) conditions; fourth order.
    """
    th, rho = path.theta, path.rho
    if len(th) < 5:
        raise NotApplicableError("need at least five samples")
    idx = np.arange(2, len(th) - 2)
    offs = th[idx[:, None] + np.arange(-2, 3)] - th[idx, None]
    # weights w solve sum_j w_j offs_j^m = [m == 1] for m = 0..4
    vander = np.stack([offs**m for m in range(5)], axis=1)
    rhs = np.zeros((len(idx), 5))
    rhs[:, 1] = 1.0
    w = np.linalg.solve(vander, rhs[..., None])[..., 0]
    d = np.sum(w * rho[idx[:, None] + np.arange(-2, 3)], axis=1)
    return rho[idx], d


def trajectory_residual(path: GeodesicPath, form: str) -> TrajectoryFit:
    """Fit the one-constant trajectory equation ``form`` to a sampled path.

    ``"interchanged"``: (rho')^2 = (mu + rho^2) / ((1 - rho^2) rho^2)
    ``"standard"``:     (rho')^2 = rho^2 ((2 lam + 1) rho^2 - 1) / (1 - rho^2)

    The first arises from the energy relation with ``E`` and ``G``
    swapped; the second from ``G(rho) dtheta/ds = c`` directly.

    with ``rho' = drho/dtheta`` from central differences in ``theta``.
    Both forms are compared with their denominators cleared, which makes
    them linear in the constant, so the least-squares fit is closed form.
    The residual reported is the largest pointwise defect of the cleared
    equation.
    """
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}; expected one of {FORMS}")
    c = path.clairaut()
    if np.any(np.abs(c) < 1e-12) or np.any(np.diff(np.sign(path.dtheta)) != 0):
        raise NotApplicableError("trajectory equation needs theta to be strictly monotone (non-radial path)")
    rho, d = _drho_dtheta(path)
    w = 1.0 - rho**2
    if form == "interchanged":
        # w rho^2 (rho')^2 - rho^2 = mu
        lhs = w * rho**2 * d**2 - rho**2
        const = float(np.mean(lhs))
        resid = lhs - const
    else:
        # w (rho')^2 + rho^2 w = 2 lam rho^4
        lhs = w * d**2 + rho**2 * w
        a = 2.0 * rho**4
        const = float(np.dot(a, lhs) / np.dot(a, a))
        resid = lhs - const * a
    return TrajectoryFit(form, const, float(np.max(np.abs(resid))))


def adjudicate(path: GeodesicPath, tol_match: float = 1e-6, tol_reject: float = 1e-2) -> dict:
    """Test both trajectory forms on a path and report which one it obeys."""
    fits = {f: trajectory_residual(path, f) for f in FORMS}
    matching = [f for f, fit in fits.items() if fit.max_residual < tol_match]
    rejected = [f for f, fit in fits.items() if fit.max_residual > tol_reject]
    decisive = len(matching) == 1 and len(rejected) == 1
    verdict = f"{matching[0]} form holds" if decisive else "inconclusive"
    return {
        "verdict": verdict,
        "decisive": decisive,
        "fits": {f: {"constant": fit.constant, "max_residual": fit.max_residual} for f, fit in fits.items()},
    }


# -- hypocycloid --------------------------------------------------------------


@dataclass(frozen=True)
class HypocycloidFit:
    k: float
    phase: float
    max_deviation: float
    rho_min: float


def hypocycloid(k: float, phi) -> np.ndarray:
    """Point traced by a circle of radius ``k`` rolling inside the unit circle."""
    phi = np.asarray(phi)
    return (1.0 - k) * np.exp(1j * phi) + k * np.exp(-1j * (1.0 - k) * phi / k)


def hypocycloid_fit(path: GeodesicPath, boundary_tol: float = 1e-2, resolution: int = 200_001) -> HypocycloidFit:
    """Compare the disc trajectory with the hypocycloid of matching inner radius.

    The rolling radius is fixed by ``rho_min = 1 - 2k`` and the curve is
    rotated so that its closest approach to the origin lines up with the
    path's.  The deviation is the largest distance from a path sample to
    the arc of the curve between two consecutive cusps, so it does not
    depend on how either curve is parametrized.
    """
    i = int(np.argmin(path.rho))
    n = len(path)
    if not (0 < i < n - 1) or min(path.rho[0], path.rho[-1]) < 1.0 - boundary_tol:
        raise IncompleteArcError("path needs a radius minimum between two boundary approaches")
    rmin = min_rho(path)
    k = (1.0 - rmin) / 2.0
    phase = float(path.theta[i] - math.pi * k)
    phi = np.linspace(0.0, 2.0 * math.pi * k, resolution)
    curve = hypocycloid(k, phi) * np.exp(1j * phase)
    pts = path.disc_points
    dev = _polyline_distance(curve, pts)
    return HypocycloidFit(k, phase % (2.0 * math.pi), float(np.max(dev)), rmin)


def _polyline_distance(curve: np.ndarray, pts: np.ndarray) -> np.ndarray:
    xy = np.column_stack([curve.real, curve.imag])
    tree = cKDTree(xy)
    _, j = tree.query(np.column_stack([pts.real, pts.imag]))
    best = np.abs(pts - curve[j])
    for lo in (j - 1, j):
        lo = np.clip(lo, 0, len(curve) - 2)
        a, b = curve[lo], curve[lo + 1]
        ab = b - a
        tpar = np.clip(np.real((pts - a) * np.conj(ab)) / np.maximum(np.abs(ab) ** 2, 1e-300), 0.0, 1.0)
        best = np.minimum(best, np.abs(pts - (a + tpar * ab)))
    return best


def path_to_rows(path: GeodesicPath):
    """Rows ``(s, t, rho, theta, dt, drho, dtheta, speed, clairaut_c)``."""
    speed = path.speed()
    c = path.clairaut()
    return [
        (path.s[i], path.t[i], path.rho[i], path.theta[i], path.dt[i],
         path.drho[i], path.dtheta[i], speed[i], c[i])
        for i in range(len(path))
    ]


__all__ = [
    "CARTESIAN_RADIUS",
    "FORMS",
    "GeodesicPath",
    "GeodesicState",
    "HypocycloidFit",
    "IncompleteArcError",
    "NotApplicableError",
    "RHO_STOP",
    "TrajectoryFit",
    "adjudicate",
    "clairaut_constant",
    "centered_clairaut_path",
    "clairaut_state",
    "full_arc",
    "geodesic_rhs",
    "hypocycloid",
    "hypocycloid_fit",
    "integrate",
    "integrate_to_boundary",
    "min_rho",
    "path_to_rows",
    "reverse_state",
    "speed_squared",
    "trajectory_residual",
    "turning_radius",
    "turning_state",
]
