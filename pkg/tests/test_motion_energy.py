import cmath
import math

import numpy as np
import pytest

from moebius_motions import geodesic_engine as ge
from moebius_motions import motion_energy as me
from moebius_motions.kinetic_metric import ProductTangent, QuadratureRule, induced_field, tangent_norm_squared
from moebius_motions.moebius_group import MoebiusMap
from moebius_motions.product_geometry import F_coords

TIMES = np.linspace(0.0, 1.0, 201)


@pytest.fixture(scope="module")
def geo_motion():
    return me.geodesic_motion(ge.centered_clairaut_path(1.0, 1.0, 1.0, dt=0.3), every=10)


def transvection_motion(times, r=0.5, speed=0.2):
    return me.motion_from_coords(times, np.column_stack([0.3 * times, r + speed * times, 0.7 + 0.5 * times]))


def test_sampled_motion_validation():
    maps = [MoebiusMap.identity()] * 5
    me.SampledMotion(np.arange(5.0), maps)
    with pytest.raises(ValueError):
        me.SampledMotion(np.arange(4.0), maps[:4])
    with pytest.raises(ValueError):
        me.SampledMotion(np.array([0.0, 1.0, 2.0, 3.5, 4.0]), maps)
    with pytest.raises(ValueError):
        me.SampledMotion(np.arange(5.0), maps[:3])


def test_constant_motion(quad):
    m = me.SampledMotion(TIMES, [F_coords(0.1, 0.4, 2.0)] * len(TIMES))
    assert np.max(np.abs(me.velocity_field(m, 5, quad).values)) == 0.0
    assert me.kinetic_energy(m, 5, quad) == 0.0
    assert me.action(m, quad) == 0.0


def test_rotation_motion(quad):
    m = me.rotation_motion(TIMES)
    f = me.velocity_field(m, 50, quad)
    assert np.max(np.abs(f.values - 1j * f.positions)) < 1e-9
    assert me.kinetic_energy(m, 50, quad) == pytest.approx(math.pi, abs=1e-9)
    assert me.kinetic_energy_lagrangian(m, 50, quad) == pytest.approx(math.pi, abs=1e-9)
    assert np.max(np.abs(me.energy_trace(m, quad) - math.pi)) < 1e-8
    assert me.action(m, quad) == pytest.approx(math.pi, abs=1e-8)


def test_velocity_field_matches_analytic_field(quad):
    # coordinate line through (1, r) in the rho direction
    for h in (1e-2, 5e-3):
        times = np.arange(-2, 3) * h
        m = me.motion_from_coords(times, np.column_stack([0 * times, 0.5 + times, 0 * times]))
        exact = induced_field(F_coords(0.0, 0.5, 0.0), ProductTangent(0.0, 1.0, 0.0), quad)
        err = np.max(np.abs(me.velocity_field(m, 2, quad).values - exact.values))
        if h == 1e-2:
            coarse = err
    assert coarse / err == pytest.approx(16.0, rel=0.05)
    assert err < 1e-7


def test_interior_index_required(quad):
    m = me.rotation_motion(TIMES)
    for i in (0, 1, len(TIMES) - 2, len(TIMES) - 1):
        with pytest.raises(IndexError):
            me.kinetic_energy(m, i, quad)


def test_eulerian_lagrangian_and_metric_identity(quad):
    m = transvection_motion(np.linspace(0.0, 0.2, 41))
    for i in (2, 20, 38):
        e = me.kinetic_energy(m, i, quad)
        assert me.kinetic_energy_lagrangian(m, i, quad) == pytest.approx(e, abs=1e-8)
        assert math.pi * me.metric_speed_squared(m, i, quad) == pytest.approx(e, abs=1e-8)
    g = m.maps[20]
    exact = math.pi * tangent_norm_squared(g, ProductTangent(0.3, 0.2, 0.5), quad)
    assert me.kinetic_energy(m, 20, quad) == pytest.approx(exact, abs=1e-8)


def test_total_mass_and_density(quad, rng):
    for _ in range(10):
        g = F_coords(*rng.uniform(0, 1, 3) * [6.0, 0.9, 6.0])
        assert me.total_mass(g, quad) == pytest.approx(2 * math.pi, abs=1e-10)
    assert np.allclose(me.density(MoebiusMap.identity(), quad.nodes), 1.0)


def test_energy_torus_invariant(quad, geo_motion):
    moved = me.torus_translate(geo_motion, cmath.exp(0.4j), cmath.exp(-1.3j))
    assert np.max(np.abs(me.energy_trace(moved, quad) - me.energy_trace(geo_motion, quad))) < 1e-9


def test_energy_trace_constant_on_geodesic(quad, geo_motion):
    e = me.energy_trace(geo_motion, quad)
    speed2 = 0.3**2 + 1.0
    assert np.max(np.abs(e - math.pi * speed2)) < 1e-8


def test_coords_round_trip(geo_motion):
    coords = me.motion_coords(geo_motion)
    again = me.motion_coords(me.motion_from_coords(geo_motion.times, coords))
    assert np.max(np.abs(coords - again)) < 1e-12
    with pytest.raises(ValueError):
        me.motion_coords(me.rotation_motion(TIMES))


def test_variation_family_is_proper_and_seeded(geo_motion):
    fam = me.variation_family(geo_motion, 6, seed=3)
    assert len(fam) == 6
    for k, v in enumerate(fam):
        assert v.shape == (len(geo_motion), 3)
        assert np.all(v[[0, -1]] == 0.0)
        assert np.count_nonzero(v.any(axis=0)) == 1 and v[:, k % 3].any()
        assert 0.5 <= np.max(np.abs(v)) <= 1.0
    again = me.variation_family(geo_motion, 6, seed=3)
    assert all(np.array_equal(a, b) for a, b in zip(fam, again))


def test_force_free_geodesic_vs_perturbed(geo_motion):
    quad = QuadratureRule(128)
    assert me.force_free_residual(geo_motion, 6, quad, seed=1) < 1e-5
    assert me.force_free_residual(me.perturb(geo_motion, 0.01), 6, quad, seed=1) > 1e-2


def test_action_derivative_matches_closed_form(quad):
    # circle factor only: E(s) = pi int (1 + s a pi cos(pi t))^2 dt, dE/ds = 0 at s = 0
    m = me.motion_from_coords(TIMES, np.column_stack([TIMES, np.full_like(TIMES, 0.4), np.zeros_like(TIMES)]))
    v = np.zeros((len(TIMES), 3))
    v[:, 0] = me.sine_bump(TIMES)
    assert abs(me.action_derivative(m, v, quad)) < 1e-9
    # a nonzero derivative: straight line at speed 1 vs bump integrated against itself
    assert me.action(m, quad) == pytest.approx(math.pi * 1.0, abs=1e-9)


def test_serialization(geo_motion):
    back = me.SampledMotion.from_dict(geo_motion.to_dict())
    assert np.array_equal(back.times, geo_motion.times)
    assert all(a == b for a, b in zip(back.maps, geo_motion.maps))
    with pytest.raises(ValueError):
        me.SampledMotion.from_dict({"times": [0, 1]})
    rows = me.energy_rows(geo_motion, QuadratureRule(64))
    assert len(rows) == len(geo_motion) and len(rows[0]) == 2
