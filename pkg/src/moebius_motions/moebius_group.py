"""Arithmetic of the group of Moebius transformations of the unit circle.

Every element is kept in the normal form ``(u, alpha)`` representing

    z -> u * (z + alpha) / (1 + conj(alpha) * z),   |u| = 1, |alpha| < 1.

All functions accept scalar or array ``z`` (complex) and are vectorized
over it.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-12
DISC_MARGIN = 1e-12


def unit_complex(value: complex) -> complex:
    """Return ``value`` renormalized to unit modulus.

    Raises ``ValueError`` when the modulus is zero or not finite, or
    when it is so far from one that renormalizing would hide a bug.
    """
    value = complex(value)
    mod = abs(value)
    if not np.isfinite(mod) or mod == 0.0:
        raise ValueError(f"cannot normalize {value!r} to the unit circle")
    if abs(mod - 1.0) > 1e-6:
        raise ValueError(f"{value!r} is not a unit complex number (|value| = {mod})")
    return value / mod


def disc_point(value: complex) -> complex:
    value = complex(value)
    if not np.isfinite(abs(value)) or abs(value) >= 1.0 - DISC_MARGIN:
        raise ValueError(f"{value!r} is not in the open unit disc")
    return value


@dataclass(frozen=True)
class MoebiusMap:
    """A circle Moebius map ``z -> u (z + alpha) / (1 + conj(alpha) z)``.

    ``u`` is renormalized to unit modulus on construction and ``alpha``
    must satisfy ``|alpha| < 1 - 1e-12``.
    """

    u: complex = 1.0 + 0.0j
    alpha: complex = 0.0j

    def __post_init__(self):
        object.__setattr__(self, "u", unit_complex(self.u))
        object.__setattr__(self, "alpha", disc_point(self.alpha))

    @classmethod
    def identity(cls) -> MoebiusMap:
        return cls(1.0, 0.0)

    @classmethod
    def rotation(cls, u: complex) -> MoebiusMap:
        return cls(u, 0.0)

    @classmethod
    def transvection(cls, alpha: complex) -> MoebiusMap:
        return cls(1.0, alpha)

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        return compose(self, other)

    def isclose(self, other: MoebiusMap, tol: float = UNIT_TOL) -> bool:
        return abs(self.u - other.u) <= tol and abs(self.alpha - other.alpha) <= tol

    def to_dict(self) -> dict:
        return {
            "u_re": self.u.real,
            "u_im": self.u.imag,
            "alpha_re": self.alpha.real,
            "alpha_im": self.alpha.imag,
        }

    @classmethod
    def from_dict(cls, data: dict) -> MoebiusMap:
        try:
            u = complex(float(data["u_re"]), float(data["u_im"]))
            alpha = complex(float(data["alpha_re"]), float(data["alpha_im"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed Moebius map record: {data!r}") from exc
        return cls(u, alpha)


def _evaluate(g: MoebiusMap, z):
    # valid anywhere off the pole -1/conj(alpha), in particular on the closed disc
    return g.u * (z + g.alpha) / (1.0 + np.conj(g.alpha) * z)


def _complex_derivative(g: MoebiusMap, z):
    a = g.alpha
    return g.u * (1.0 - abs(a) ** 2) / (1.0 + np.conj(a) * z) ** 2


def apply(g: MoebiusMap, z):
    """Evaluate ``g`` at points ``z`` of the unit circle."""
    return _evaluate(g, np.asarray(z, dtype=complex) if np.ndim(z) else complex(z))


def compose(g: MoebiusMap, h: MoebiusMap) -> MoebiusMap:
    """Return the normal form of ``g o h``.

    The normal form is read off from the value and the complex
    derivative of ``g o h`` at the origin: the derivative fixes the
    rotation part and the value then fixes ``alpha``.
    """
    h0 = _evaluate(h, 0.0)
    f0 = _evaluate(g, h0)
    df0 = _complex_derivative(g, h0) * _complex_derivative(h, 0.0)
    u = df0 / abs(df0)
    return MoebiusMap(u, u.conjugate() * f0)


def inverse(g: MoebiusMap) -> MoebiusMap:
    return MoebiusMap(g.u.conjugate(), -g.u * g.alpha)


def circle_derivative(g: MoebiusMap, z):
    """Stretch factor ``|g'(z)| = (1 - |alpha|^2) / |1 + conj(alpha) z|^2``.

    This is the derivative of the induced circle diffeomorphism with
    respect to arc length, and is strictly positive.
    """
    a = g.alpha
    return (1.0 - abs(a) ** 2) / np.abs(1.0 + np.conj(a) * np.asarray(z)) ** 2


def roots_of_unity(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def random_map(rng: np.random.Generator, max_radius: float = 0.9) -> MoebiusMap:
    """Draw a map with uniform rotation angle and ``|alpha| <= max_radius``."""
    u = cmath.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    alpha = max_radius * np.sqrt(rng.uniform()) * cmath.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    return MoebiusMap(u, alpha)
