import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from conftest import isometries, random_isometry
from surfacekit.errors import IntersectingAxes, SharedEndpoint
from surfacekit.psl2c import (
    INF,
    is_loxodromic,
    P0,
    H3Point,
    Isometry,
    OrientedGeodesic,
    UnitDetMatrix,
    a_t,
    act_h3,
    axis,
    boundary_close,
    cartan_kak,
    common_perpendicular,
    frame_apply,
    h3_distance,
    quasi_distance,
    strip,
    translation_length,
)
from surfacekit.tripods import R, g_r


def test_translation_length_diagonal():
    assert abs(translation_length(a_t(3)) - 3) < 1e-12
    s = 1 + 0.5j
    g = Isometry.of(cmath.exp(s), 0, 0, cmath.exp(-s))
    assert abs(translation_length(g) - (2 + 1j)) < 1e-12


def test_translation_length_conjugate(rng):
    for _ in range(20):
        h = random_isometry(rng)
        assert abs(translation_length(a_t(3).conj(h)) - 3) < 1e-9


def test_axis_examples(rng):
    ax = axis(a_t(2))
    assert ax.source == 0 and ax.target is INF
    ax = axis(a_t(-2))
    assert ax.source is INF and ax.target == 0
    h = random_isometry(rng)
    ax = axis(a_t(2).conj(h))
    assert boundary_close(ax.source, h(0j)) and boundary_close(ax.target, h(INF))


def _geodesic_point(p, q, s):
    """Point at signed parameter s on the geodesic (p, q) for finite real p < q."""
    c, r = (p + q) / 2, (q - p) / 2
    th = 2 * math.atan(math.exp(s))
    return H3Point(c - r * math.cos(th), r * math.sin(th))


def test_common_perpendicular_against_minimization():
    perp = common_perpendicular(OrientedGeodesic(0j, INF), OrientedGeodesic(1 + 0j, 2 + 0j))

    def inner(s):
        x = _geodesic_point(1.0, 2.0, s)
        return minimize_scalar(
            lambda u: h3_distance(H3Point(0j, math.exp(u)), x), bounds=(-10, 10), method="bounded",
            options={"xatol": 1e-12},
        ).fun

    best = minimize_scalar(inner, bounds=(-10, 10), method="bounded", options={"xatol": 1e-12}).fun
    assert abs(perp.length - best) < 1e-9
    assert abs(h3_distance(perp.foot1, perp.foot2) - perp.length) < 1e-9


def test_common_perpendicular_degenerate():
    with pytest.raises(IntersectingAxes):
        common_perpendicular(OrientedGeodesic(0j, INF), OrientedGeodesic(-1 + 0j, 1 + 0j))
    with pytest.raises(SharedEndpoint):
        common_perpendicular(OrientedGeodesic(0j, INF), OrientedGeodesic(0j, 1 + 0j))


def test_cartan_examples():
    c = cartan_kak(a_t(5))
    assert abs(c.t - 5) < 1e-12
    assert quasi_distance(c.reconstruct(), a_t(5)) < 1e-10
    k = R(1.1) @ Isometry.of(cmath.exp(0.3j), 0, 0, cmath.exp(-0.3j))
    assert cartan_kak(k).t < 1e-7


def test_cartan_of_g_r():
    t = cartan_kak(g_r(20)).t
    assert abs(t - 10 + math.log(4 / 3)) <= 2 * math.exp(-5)


def test_quasi_distance_diagonal_regression():
    t = 1.7
    expected = math.sqrt((math.exp(t / 2) - 1) ** 2 + (math.exp(-t / 2) - 1) ** 2)
    assert abs(quasi_distance(Isometry.of(1, 0, 0, 1), a_t(t)) - expected) < 1e-14


def test_frame_apply_examples():
    f = frame_apply(Isometry.of(1, 0, 0, 1))
    assert f.point == P0 and f.u == (0.0, 0.0, 1.0) and f.n == (1.0, 0.0, 0.0)
    f = frame_apply(a_t(2))
    assert abs(f.point.t - math.e**2) < 1e-12 and abs(f.point.z) < 1e-12
    assert np.allclose(np.array(f.u) / f.point.t, (0, 0, 1)) and np.allclose(np.array(f.n) / f.point.t, (1, 0, 0))
    f = frame_apply(R(math.pi))
    assert abs(f.point.t - 1) < 1e-12 and np.allclose(f.u, (0, 0, -1))


def test_sign_and_determinant():
    m = UnitDetMatrix(2, 1, 3, 2)
    assert abs(m.a * m.d - m.b * m.c - 1) < 1e-12
    g = Isometry.of(2, 1, 3, 2)
    assert g == Isometry(-g.lift)


@given(isometries(), isometries())
def test_conjugation_invariance(g, h):
    g = g @ a_t(2.5)
    assume(is_loxodromic(g))
    l1, l2 = translation_length(g), translation_length(g.conj(h))
    assert abs(strip(l1 - l2)) < 1e-9 * max(1, abs(l1))


@given(isometries(), st.integers(1, 5))
def test_powers(g, n):
    g = g @ a_t(1.5)
    assume(is_loxodromic(g))  # a product with an elliptic can be elliptic
    ell = translation_length(g)
    assert abs(strip(translation_length(g**n) - n * ell)) < 1e-8 * n * max(1, abs(ell))


@given(isometries(), isometries())
def test_axis_equivariance(g, h):
    g = g @ a_t(2.0)
    assume(is_loxodromic(g))
    ax, bx = axis(g), axis(g.conj(h))
    assert boundary_close(bx.source, h(ax.source), 1e-9)
    assert boundary_close(bx.target, h(ax.target), 1e-9)


@given(isometries(scale=2.0))
def test_cartan_reconstruction(g):
    c = cartan_kak(g)
    assert quasi_distance(c.reconstruct(), g) <= 1e-10 * max(1.0, math.exp(c.t / 2))
    assert abs(c.t - h3_distance(act_h3(g, P0), P0)) < 1e-12


@given(isometries(), isometries(), isometries())
def test_quasi_distance_left_invariant(g, h, k):
    assert abs(quasi_distance(k @ g, k @ h) - quasi_distance(g, h)) < 1e-9 * max(
        1.0, abs(quasi_distance(g, h))
    ) * max(1.0, abs(k.lift.a) + abs(k.lift.d)) ** 2


def test_quasi_distance_triangle_constant(rng):
    # recorded, not assumed: the worst ratio d(g,k) / (d(g,h) + d(h,k)) on a compact sample
    worst = 0.0
    for _ in range(300):
        g, h, k = (random_isometry(rng, 0.4) for _ in range(3))
        worst = max(worst, quasi_distance(g, k) / (quasi_distance(g, h) + quasi_distance(h, k)))
    assert worst < 4.0
