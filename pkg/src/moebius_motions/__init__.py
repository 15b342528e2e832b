"""Geometry of Moebius motions of the circle under the kinetic-energy metric."""

from .geodesic_engine import (
    GeodesicPath,
    GeodesicState,
    adjudicate,
    clairaut_constant,
    hypocycloid_fit,
    integrate,
    trajectory_residual,
)
from .kinetic_metric import InducedField, ProductTangent, QuadratureRule, gram_matrix, induced_field, inner, norm_squared
from .moebius_group import MoebiusMap, apply, circle_derivative, compose, inverse
from .motion_energy import SampledMotion, action, force_free_residual, kinetic_energy, kinetic_energy_lagrangian
from .product_geometry import F_inverse, F_map, ProductPoint, curvature_numeric, gaussian_curvature, metric_tensor

__version__ = "0.1.0"
