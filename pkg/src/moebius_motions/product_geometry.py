"""The model space S^1 x disc and the isometry onto the Moebius group.

The disc carries ``ds^2 = 2 (drho^2 + rho^2 dtheta^2) / (1 - rho^2)``
and the circle factor has length 2 pi.  In the notation of surfaces of
revolution the disc coefficients are

    E(rho) = 2 / (1 - rho^2),   G(rho) = 2 rho^2 / (1 - rho^2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .kinetic_metric import DegenerateChartError
from .moebius_group import MoebiusMap

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ProductPoint:
    """Point ``(t, rho, theta)``; both angles are stored reduced mod 2 pi."""

    t: float = 0.0
    rho: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        object.__setattr__(self, "t", float(self.t) % TWO_PI)
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)


@dataclass(frozen=True)
class MetricTensor:
    g_tt: float
    g_rr: float
    g_thth: float

    @property
    def degenerate(self) -> bool:
        """True at the origin, where the polar chart collapses."""
        return self.g_thth == 0.0

    def as_matrix(self) -> np.ndarray:
        return np.diag([self.g_tt, self.g_rr, self.g_thth])


@dataclass(frozen=True)
class Christoffel:
    """Nonzero symbols of the disc metric in polar coordinates."""

    rho_rhorho: float
    rho_thth: float
    th_rhoth: float


def E(rho):
    return 2.0 / (1.0 - rho * rho)


def G(rho):
    return 2.0 * rho * rho / (1.0 - rho * rho)


def dE(rho):
    return 4.0 * rho / (1.0 - rho * rho) ** 2


def dG(rho):
    return 4.0 * rho / (1.0 - rho * rho) ** 2


def metric_tensor(p: ProductPoint) -> MetricTensor:
    return MetricTensor(1.0, E(p.rho), G(p.rho))


def christoffel(p: ProductPoint | float) -> Christoffel:
    """Christoffel symbols of the diagonal metric ``E drho^2 + G dtheta^2``.

    Returns ``E'/(2E)``, ``-G'/(2E)`` and ``G'/(2G)``; all other symbols
    vanish, including every symbol with a ``t`` index.
    """
    rho = p.rho if isinstance(p, ProductPoint) else float(p)
    if rho == 0.0:
        raise DegenerateChartError("Christoffel symbols are singular at rho = 0 in polar coordinates")
    s = 1.0 - rho * rho
    return Christoffel(rho / s, -rho / s, 1.0 / (rho * s))


def gaussian_curvature(rho: float) -> float:
    return -1.0 / (1.0 - rho * rho)


def curvature_numeric(rho: float, h: float) -> float:
    """Gaussian curvature of the disc factor by nested central differences.

    Uses ``K = -1/(2 sqrt(EG)) d/drho (G' / sqrt(EG))`` for a metric with
    no cross term and coefficients depending on ``rho`` only.  ``G'`` is
    itself a central difference, so the stencil reaches ``rho +- 2h``.
    """
    if not (0.0 < h < rho / 2.0 and rho + 2.0 * h < 1.0):
        raise ValueError(f"step h={h} too large for the stencil at rho={rho}")

    def flux(r):
        dg = (G(r + h) - G(r - h)) / (2.0 * h)
        return dg / math.sqrt(E(r) * G(r))

    dflux = (flux(rho + h) - flux(rho - h)) / (2.0 * h)
    return -dflux / (2.0 * math.sqrt(E(rho) * G(rho)))


def radial_length(r0: float, r1: float) -> float:
    """Length of the radial segment ``[r0, r1]``: ``sqrt(2) (asin r1 - asin r0)``."""
    if not 0.0 <= r0 <= r1 < 1.0:
        raise ValueError(f"need 0 <= r0 <= r1 < 1, got ({r0}, {r1})")
    return math.sqrt(2.0) * (math.asin(r1) - math.asin(r0))


RAY_LENGTH = math.pi / math.sqrt(2.0)


def F_map(p: ProductPoint) -> MoebiusMap:
    return MoebiusMap(cmath.exp(1j * p.t), p.rho * cmath.exp(1j * p.theta))


def F_coords(t: float, rho: float, theta: float) -> MoebiusMap:
    """``F`` on raw coordinates; angles need not be reduced."""
    return MoebiusMap(cmath.exp(1j * t), rho * cmath.exp(1j * theta))


def F_inverse(g: MoebiusMap) -> ProductPoint:
    rho = abs(g.alpha)
    theta = cmath.phase(g.alpha) if rho > 0.0 else 0.0
    return ProductPoint(cmath.phase(g.u), rho, theta)
