import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad as scipy_quad

from moebius_motions.kinetic_metric import DegenerateChartError
from moebius_motions.moebius_group import MoebiusMap
from moebius_motions.product_geometry import (
    E,
    RAY_LENGTH,
    F_coords,
    F_inverse,
    F_map,
    G,
    ProductPoint,
    christoffel,
    curvature_numeric,
    dE,
    dG,
    gaussian_curvature,
    metric_tensor,
    radial_length,
)


def test_product_point_reduces_angles():
    p = ProductPoint(-0.5, 0.3, 7.0)
    assert p.t == pytest.approx(2 * math.pi - 0.5)
    assert p.theta == pytest.approx(7.0 - 2 * math.pi)
    with pytest.raises(ValueError):
        ProductPoint(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        ProductPoint(0.0, -0.1, 0.0)


def test_metric_tensor_examples():
    m = metric_tensor(ProductPoint(0.0, 0.5, 0.0))
    assert (m.g_tt, m.g_rr, m.g_thth) == pytest.approx((1.0, 8.0 / 3.0, 2.0 / 3.0))
    assert metric_tensor(ProductPoint(0.0, 0.0, 0.0)).degenerate
    assert not m.degenerate


def test_derivative_helpers_finite_difference():
    for rho in (0.1, 0.5, 0.85):
        h = 1e-6
        assert dE(rho) == pytest.approx((E(rho + h) - E(rho - h)) / (2 * h), rel=1e-7)
        assert dG(rho) == pytest.approx((G(rho + h) - G(rho - h)) / (2 * h), rel=1e-7)


def test_christoffel_examples():
    c = christoffel(0.5)
    assert (c.rho_rhorho, c.rho_thth, c.th_rhoth) == pytest.approx((2.0 / 3.0, -2.0 / 3.0, 8.0 / 3.0))
    assert christoffel(ProductPoint(1.0, 0.5, 2.0)) == c
    with pytest.raises(DegenerateChartError):
        christoffel(0.0)


@pytest.mark.parametrize("rho", [0.1, 0.4, 0.8])
def test_christoffel_matches_metric_derivatives(rho):
    # Gamma^rho_rhorho = E'/2E, Gamma^rho_thth = -G'/2E, Gamma^th_rhoth = G'/2G
    h = 1e-6
    de = (E(rho + h) - E(rho - h)) / (2 * h)
    dg = (G(rho + h) - G(rho - h)) / (2 * h)
    c = christoffel(rho)
    assert c.rho_rhorho == pytest.approx(de / (2 * E(rho)), rel=1e-7)
    assert c.rho_thth == pytest.approx(-dg / (2 * E(rho)), rel=1e-7)
    assert c.th_rhoth == pytest.approx(dg / (2 * G(rho)), rel=1e-7)


def test_gaussian_curvature_examples():
    assert gaussian_curvature(0.0) == -1.0
    assert gaussian_curvature(0.5) == pytest.approx(-4.0 / 3.0)


def test_curvature_numeric_examples():
    assert curvature_numeric(0.5, 1e-4) == pytest.approx(-4.0 / 3.0, abs=1e-6)
    assert curvature_numeric(0.2, 1e-4) == pytest.approx(-1.0 / 0.96, abs=1e-6)


def test_curvature_numeric_second_order():
    k = gaussian_curvature(0.5)
    e1 = abs(curvature_numeric(0.5, 1e-3) - k)
    e2 = abs(curvature_numeric(0.5, 5e-4) - k)
    assert math.log2(e1 / e2) == pytest.approx(2.0, abs=0.05)
    assert abs(curvature_numeric(0.3, 1e-4) - gaussian_curvature(0.3)) < 1e-6
    with pytest.raises(ValueError):
        curvature_numeric(0.1, 0.06)
    with pytest.raises(ValueError):
        curvature_numeric(0.99, 0.01)


def test_radial_length_against_quadrature():
    oracle, _ = scipy_quad(lambda r: math.sqrt(E(r)), 0.0, 0.5, epsabs=1e-13)
    assert radial_length(0.0, 0.5) == pytest.approx(math.sqrt(2) * math.pi / 6, abs=1e-15)
    assert radial_length(0.0, 0.5) == pytest.approx(oracle, abs=1e-12)
    assert radial_length(0.3, 0.3) == 0.0
    assert RAY_LENGTH == pytest.approx(2.221441469079183)
    with pytest.raises(ValueError):
        radial_length(0.5, 0.2)
    with pytest.raises(ValueError):
        radial_length(0.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 0.99), st.floats(0.0, 0.99), st.floats(0.0, 0.99))
def test_radial_length_additive(a, b, c):
    a, b, c = sorted((a, b, c))
    assert radial_length(a, c) == pytest.approx(radial_length(a, b) + radial_length(b, c), abs=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 6.28), st.floats(0.01, 0.95), st.floats(0.0, 6.28))
def test_F_round_trip(t, rho, theta):
    p = ProductPoint(t, rho, theta)
    back = F_inverse(F_map(p))
    assert back.rho == pytest.approx(p.rho, abs=1e-14)
    assert math.remainder(back.t - p.t, 2 * math.pi) == pytest.approx(0.0, abs=1e-12)
    assert math.remainder(back.theta - p.theta, 2 * math.pi) == pytest.approx(0.0, abs=1e-12)


def test_F_examples():
    assert F_map(ProductPoint(0.0, 0.0, 0.0)).isclose(MoebiusMap.identity())
    assert F_coords(0.0, 0.5, math.pi / 2).isclose(MoebiusMap(1, 0.5j))
    p = F_inverse(MoebiusMap(1, 0))
    assert (p.rho, p.theta) == (0.0, 0.0)
    assert np.isclose(F_coords(0, 0.5, 2 * math.pi + 1).alpha, F_coords(0, 0.5, 1).alpha)
