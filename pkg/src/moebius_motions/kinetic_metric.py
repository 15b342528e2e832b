"""Kinetic-energy metric on the Moebius group.

A tangent vector at ``g`` is represented by the velocity field it
induces on the circle, sampled on the nodes of a uniform quadrature
rule; its squared norm is the mean squared particle speed.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .moebius_group import MoebiusMap, roots_of_unity


class DegenerateChartError(ValueError):
    """Raised where the polar chart ``alpha = rho e^{i theta}`` breaks down (rho = 0)."""


@dataclass(frozen=True)
class QuadratureRule:
    """Periodic trapezoid rule on ``n`` equispaced points of the unit circle."""

    n: int = 256

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise ValueError(f"node count must be even and >= 8, got {self.n}")

    @cached_property
    def nodes(self) -> np.ndarray:
        return roots_of_unity(self.n)

    @property
    def weight(self) -> float:
        return 2.0 * np.pi / self.n

    def integrate(self, values) -> float | complex:
        """Approximate the integral over the circle with respect to arc length."""
        return self.weight * np.sum(values, axis=-1)


@dataclass(frozen=True)
class ProductTangent:
    """Tangent vector in the coordinates ``(t, rho, theta)`` of S^1 x disc."""

    dt: float = 0.0
    drho: float = 0.0
    dtheta: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite([self.dt, self.drho, self.dtheta])):
            raise ValueError(f"non-finite tangent components: {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.dt, self.drho, self.dtheta])


@dataclass(frozen=True, eq=False)
class InducedField:
    """Velocity field on the circle induced by a tangent vector of the group.

    ``values[k]`` is the velocity of the particle that started at
    ``nodes[k]``; it is tangent to the circle at ``positions[k]``.
    """

    nodes: np.ndarray
    positions: np.ndarray
    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)

    def tangency_defect(self) -> float:
        return float(np.max(np.abs(np.real(self.values * np.conj(self.positions)))))

    def __add__(self, other: InducedField) -> InducedField:
        _check_same(self, other)
        return InducedField(self.nodes, self.positions, self.values + other.values)

    def __sub__(self, other: InducedField) -> InducedField:
        _check_same(self, other)
        return InducedField(self.nodes, self.positions, self.values - other.values)

    def __mul__(self, scalar: float) -> InducedField:
        return InducedField(self.nodes, self.positions, scalar * self.values)

    __rmul__ = __mul__


def _check_same(f1: InducedField, f2: InducedField):
    if f1.n != f2.n:
        raise ValueError(f"fields sampled on different rules ({f1.n} vs {f2.n} nodes)")


def _check_radius(r: float):
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {r}")


def coordinate_fields(r: float, quad: QuadratureRule):
    """Fields induced by d/dt, d/drho, d/dtheta at the transvection ``T_r``.

    Closed forms::

        X(z) = i (z + r) / (1 + r z)
        Y(z) = (1 - z^2) / (1 + r z)^2
        Z(z) = r i (1 + 2 r z + z^2) / (1 + r z)^2
    """
    _check_radius(r)
    z = quad.nodes
    q = (z + r) / (1.0 + r * z)
    denom = (1.0 + r * z) ** 2
    x = 1j * q
    y = (1.0 - z**2) / denom
    w = r * 1j * (1.0 + 2.0 * r * z + z**2) / denom
    return tuple(InducedField(z, q, f) for f in (x, y, w))


def induced_field(g: MoebiusMap, v: ProductTangent, quad: QuadratureRule) -> InducedField:
    """Field induced at ``g`` by the coordinate velocity ``v``.

    Differentiates ``u (z + alpha) / (1 + conj(alpha) z)`` along the
    curve ``(u e^{i dt s}, (rho + drho s) e^{i (theta + dtheta s)})``.
    The result is linear in ``v``; no polar chart is needed when
    ``drho = dtheta = 0``.
    """
    z = quad.nodes
    u, a = g.u, g.alpha
    rho, theta = abs(a), cmath.phase(a)
    e = cmath.exp(1j * theta)
    dalpha = v.drho * e + v.dtheta * 1j * rho * e
    denom = 1.0 + np.conj(a) * z
    t_alpha = (z + a) / denom
    d_t_alpha = (dalpha * denom - np.conj(dalpha) * z * (z + a)) / denom**2
    values = u * (1j * v.dt * t_alpha + d_t_alpha)
    return InducedField(z, u * t_alpha, values)


def inner(f1: InducedField, f2: InducedField, quad: QuadratureRule) -> float:
    """Mean of ``Re(f1 conj(f2))`` over the nodes."""
    _check_same(f1, f2)
    if f1.n != quad.n:
        raise ValueError(f"field has {f1.n} samples but rule has {quad.n} nodes")
    return float(np.mean(np.real(f1.values * np.conj(f2.values))))


def norm_squared(field: InducedField, quad: QuadratureRule) -> float:
    return inner(field, field, quad)


def coordinate_basis(g: MoebiusMap, quad: QuadratureRule):
    if abs(g.alpha) == 0.0:
        raise DegenerateChartError("polar chart is degenerate at alpha = 0")
    return tuple(
        induced_field(g, ProductTangent(*e), quad) for e in np.eye(3)
    )


def gram_matrix(g: MoebiusMap, quad: QuadratureRule) -> np.ndarray:
    """3x3 Gram matrix of the fields induced by d/dt, d/drho, d/dtheta at ``g``."""
    basis = coordinate_basis(g, quad)
    gram = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            gram[i, j] = gram[j, i] = inner(basis[i], basis[j], quad)
    return gram


def tangent_norm_squared(g: MoebiusMap, v: ProductTangent, quad: QuadratureRule) -> float:
    return norm_squared(induced_field(g, v, quad), quad)


def torus_act(g: MoebiusMap, u: complex, v: complex) -> MoebiusMap:
    """Return ``u g conj(v)``, i.e. ``z -> u g(conj(v) z)``, in normal form."""
    # g(conj(v) z) = g.u conj(v) (z + v alpha) / (1 + conj(v alpha) z)
    return MoebiusMap(u * g.u * np.conj(v), v * g.alpha)


def field_to_rows(field: InducedField):
    """Rows ``(index, z_re, z_im, field_re, field_im)`` for CSV export."""
    return [
        (k, z.real, z.imag, f.real, f.imag)
        for k, (z, f) in enumerate(zip(field.nodes, field.values))
    ]


def closed_form_gram(r: float) -> np.ndarray:
    return np.diag([1.0, 2.0 / (1.0 - r * r), 2.0 * r * r / (1.0 - r * r)])


__all__ = [
    "DegenerateChartError",
    "InducedField",
    "ProductTangent",
    "QuadratureRule",
    "closed_form_gram",
    "coordinate_basis",
    "coordinate_fields",
    "field_to_rows",
    "gram_matrix",
    "induced_field",
    "inner",
    "norm_squared",
    "tangent_norm_squared",
    "torus_act",
]
