"""Moebius motions sampled in time: kinetic energy, action and criticality.

A motion is a uniform time grid with one ``MoebiusMap`` per sample.
Time derivatives use fourth-order finite differences (centered in the
interior, one-sided at the two first and last samples).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .geodesic_engine import GeodesicPath
from .kinetic_metric import (
    DegenerateChartError,
    InducedField,
    ProductTangent,
    QuadratureRule,
    induced_field,
    norm_squared,
)
from .moebius_group import MoebiusMap, circle_derivative, compose, inverse
from .product_geometry import F_coords

CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
FORWARD = np.array(
    [
        [-25.0, 48.0, -36.0, 16.0, -3.0],  # derivative at sample 0
        [-3.0, -10.0, 18.0, -6.0, 1.0],  # derivative at sample 1
    ]
) / 12.0


@dataclass(frozen=True, eq=False)
class SampledMotion:
    times: np.ndarray
    maps: tuple

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(times) < 5 or len(self.maps) != len(times):
            raise ValueError("a motion needs at least 5 samples and one map per time")
        dt = np.diff(times)
        if np.any(dt <= 0.0) or np.ptp(dt) > 1e-9 * max(abs(dt[0]), 1.0):
            raise ValueError("motion times must be strictly increasing and uniformly spaced")

    def __len__(self):
        return len(self.times)

    @property
    def step(self) -> float:
        return float((self.times[-1] - self.times[0]) / (len(self.times) - 1))

    @property
    def u(self) -> np.ndarray:
        return np.array([g.u for g in self.maps])

    @property
    def alpha(self) -> np.ndarray:
        return np.array([g.alpha for g in self.maps])

    def trajectories(self, p) -> np.ndarray:
        """``positions[i, k] = maps[i](p[k])``."""
        p = np.asarray(p)
        u, a = self.u[:, None], self.alpha[:, None]
        return u * (p + a) / (1.0 + np.conj(a) * p)

    def to_dict(self) -> dict:
        return {"times": [float(t) for t in self.times], "maps": [g.to_dict() for g in self.maps]}

    @classmethod
    def from_dict(cls, data: dict) -> SampledMotion:
        try:
            return cls(np.asarray(data["times"], dtype=float), [MoebiusMap.from_dict(m) for m in data["maps"]])
        except (KeyError, TypeError) as exc:
            raise ValueError("malformed motion record") from exc


def motion_from_coords(times, coords) -> SampledMotion:
    """Motion ``t -> F(t_coord, rho, theta)`` from an ``(N, 3)`` coordinate array."""
    coords = np.asarray(coords, dtype=float)
    return SampledMotion(times, [F_coords(*c) for c in coords])


def motion_coords(motion: SampledMotion) -> np.ndarray:
    """Continuous ``(t, rho, theta)`` coordinates of every sample (angles unwrapped)."""
    u, a = motion.u, motion.alpha
    rho = np.abs(a)
    if np.any(rho == 0.0):
        raise DegenerateChartError("motion passes through alpha = 0 where the polar chart is degenerate")
    return np.column_stack([np.unwrap(np.angle(u)), rho, np.unwrap(np.angle(a))])


def geodesic_motion(path: GeodesicPath, every: int = 10) -> SampledMotion:
    """Image under ``F`` of a geodesic path, with time equal to its parameter.

    ``every`` subsamples the path, so that a path integrated at a fine
    step gives a motion on a coarser grid.
    """
    sub = path.subsample(every)
    return motion_from_coords(sub.s, np.column_stack([sub.t, sub.rho, sub.theta]))


def rotation_motion(times, speed: float = 1.0) -> SampledMotion:
    return SampledMotion(times, [MoebiusMap(np.exp(1j * speed * t), 0.0) for t in times])


def _time_derivative(values: np.ndarray, h: float, index: int) -> np.ndarray:
    """Fourth-order derivative along axis 0 at ``index``.

    Stencils act on differences from the sample at ``index``, so constant
    data gives an exact zero.
    """
    n = len(values)
    if 2 <= index <= n - 3:
        return np.tensordot(CENTRAL, values[index - 2:index + 3] - values[index], axes=1) / h
    if index in (0, 1):
        return np.tensordot(FORWARD[index], values[:5] - values[index], axes=1) / h
    if index in (n - 1, n - 2):
        # mirror image of the forward stencils
        return -np.tensordot(FORWARD[n - 1 - index], values[::-1][:5] - values[index], axes=1) / h
    raise IndexError(index)


def _require_interior(motion: SampledMotion, index: int):
    if not 2 <= index <= len(motion) - 3:
        raise IndexError(f"index {index} lacks the two neighbours on each side needed for central differences")


def velocity_field(motion: SampledMotion, index: int, quad: QuadratureRule) -> InducedField:
    """Velocities of the particles that started at the quadrature nodes.

    ``values[k]`` is the time derivative of ``maps(t)(p_k)`` at
    ``t = times[index]``, located at ``q_k = maps[index](p_k)``.
    """
    _require_interior(motion, index)
    return _velocity_field(motion, index, quad)


def _velocity_field(motion, index, quad):
    p = quad.nodes
    lo = min(max(index - 2, 0), len(motion) - 5)
    window = SampledMotion(motion.times[lo:lo + 5], motion.maps[lo:lo + 5])
    pos = window.trajectories(p)
    v = _time_derivative(pos, motion.step, index - lo)
    return InducedField(p, pos[index - lo], v)


def kinetic_energy(motion: SampledMotion, index: int, quad: QuadratureRule) -> float:
    """Half the integral over the initial positions of the squared particle speed."""
    _require_interior(motion, index)
    return _energy(motion, index, quad)


def _energy(motion, index, quad):
    v = _velocity_field(motion, index, quad).values
    return 0.5 * quad.integrate(np.abs(v) ** 2)


def density(g: MoebiusMap, q) -> np.ndarray:
    """Mass density at ``q`` after transporting unit density by ``g``."""
    return circle_derivative(inverse(g), q)


def total_mass(g: MoebiusMap, quad: QuadratureRule) -> float:
    return float(quad.integrate(density(g, quad.nodes)))


def kinetic_energy_lagrangian(motion: SampledMotion, index: int, quad: QuadratureRule) -> float:
    """Energy as a spatial integral over the current particle positions.

    The quadrature nodes are taken as the current positions ``q``; each
    is traced back to its initial position ``p = g^{-1}(q)``, its
    velocity is differentiated along the motion, and the squared speed
    is weighted by the transported density.
    """
    _require_interior(motion, index)
    q = quad.nodes
    g = motion.maps[index]
    p = inverse(g)(q)
    window = SampledMotion(motion.times[index - 2:index + 3], motion.maps[index - 2:index + 3])
    v = _time_derivative(window.trajectories(p), motion.step, 2)
    return 0.5 * quad.integrate(np.abs(v) ** 2 * density(g, q))


def metric_speed_squared(motion: SampledMotion, index: int, quad: QuadratureRule) -> float:
    """``||gamma'(t)||^2`` from coordinate velocities and the kinetic metric."""
    _require_interior(motion, index)
    window = SampledMotion(motion.times[index - 2:index + 3], motion.maps[index - 2:index + 3])
    dc = _time_derivative(motion_coords(window), motion.step, 2)
    return norm_squared(induced_field(motion.maps[index], ProductTangent(*dc), quad), quad)


def energy_trace(motion: SampledMotion, quad: QuadratureRule) -> np.ndarray:
    """Kinetic energy at every sample, with one-sided stencils at the ends."""
    pos = motion.trajectories(quad.nodes)
    h = motion.step
    n = len(motion)
    vel = np.empty_like(pos)
    vel[2:n - 2] = sum(w * (pos[j:n - 4 + j] - pos[2:n - 2]) for j, w in enumerate(CENTRAL) if w) / h
    for i in (0, 1, n - 2, n - 1):
        vel[i] = _time_derivative(pos, h, i)
    return 0.5 * quad.weight * np.sum(np.abs(vel) ** 2, axis=1)


def action(motion: SampledMotion, quad: QuadratureRule) -> float:
    """Time integral of the kinetic energy.

    Composite trapezoid with Gregory end corrections (end weights 3/8,
    7/6, 23/24).  The plain trapezoid leaves an O(h^2) endpoint error in
    the first variation that is visible at the criticality tolerances.
    """
    e = energy_trace(motion, quad)
    h = motion.step
    head = 3.0 * e[0] - 4.0 * e[1] + e[2]
    tail = 3.0 * e[-1] - 4.0 * e[-2] + e[-3]
    return float(trapezoid(e, dx=h) - h / 24.0 * (head + tail))


# -- criticality --------------------------------------------------------------


def sine_bump(times) -> np.ndarray:
    times = np.asarray(times)
    bump = np.sin(math.pi * (times - times[0]) / (times[-1] - times[0]))
    bump[[0, -1]] = 0.0  # sin(pi) is not exactly zero in floating point
    return bump


def variation_family(motion: SampledMotion, count: int, seed: int = 0,
                     amplitude: tuple[float, float] = (0.5, 1.0)) -> list[np.ndarray]:
    """Proper variations ``a sin(pi (t - t0) / (t1 - t0)) e_k``, ``k`` cycling over the coordinates.

    Amplitudes ``|a|`` are drawn uniformly from ``amplitude`` with a
    random sign.  Each returned array has shape ``(N, 3)``.
    """
    rng = np.random.default_rng(seed)
    bump = sine_bump(motion.times)
    out = []
    for i in range(count):
        a = rng.uniform(*amplitude) * rng.choice([-1.0, 1.0])
        field = np.zeros((len(motion), 3))
        field[:, i % 3] = a * bump
        out.append(field)
    return out


def action_derivative(motion: SampledMotion, variation: np.ndarray, quad: QuadratureRule, ds: float = 1e-4) -> float:
    """Central difference in ``s`` of the action of ``F(coords + s V)``."""
    coords = motion_coords(motion)
    plus = motion_from_coords(motion.times, coords + ds * variation)
    minus = motion_from_coords(motion.times, coords - ds * variation)
    return (action(plus, quad) - action(minus, quad)) / (2.0 * ds)


def force_free_residual(motion: SampledMotion, variation_count: int, quad: QuadratureRule,
                        seed: int = 0, ds: float = 1e-4) -> float:
    """Largest ``|dE/ds|`` over a seeded family of proper variations.

    A force-free motion is a critical point of the action, so this is
    near zero for geodesics.  Only the sampled family is tested.
    """
    if len(motion) < 5:
        raise ValueError("motion too short to support a bump variation")
    derivs = [action_derivative(motion, v, quad, ds) for v in variation_family(motion, variation_count, seed)]
    return float(np.max(np.abs(derivs)))


def perturb(motion: SampledMotion, amplitude: float = 0.01, coordinate: int = 1) -> SampledMotion:
    """Add an interior sine bump of the given amplitude to one coordinate."""
    coords = motion_coords(motion)
    coords[:, coordinate] += amplitude * sine_bump(motion.times)
    return motion_from_coords(motion.times, coords)


def torus_translate(motion: SampledMotion, u: complex, v: complex) -> SampledMotion:
    """Apply ``g -> u g conj(v)`` to every sample."""
    left = MoebiusMap.rotation(u)
    right = MoebiusMap.rotation(np.conj(v))
    return SampledMotion(motion.times, [compose(left, compose(g, right)) for g in motion.maps])


def energy_rows(motion: SampledMotion, quad: QuadratureRule):
    return list(zip(motion.times.tolist(), energy_trace(motion, quad).tolist()))
