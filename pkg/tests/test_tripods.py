import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import isometries, random_isometry
from surfacekit.errors import NotSchottky
from surfacekit.pants import half_lengths_of, is_flat, is_futal, torus_shift
from surfacekit.psl2c import IDENTITY, a_t, axis, normalizer, quasi_distance
from surfacekit.tripods import (
    LOG43,
    R,
    SchottkyGroup,
    TripodFrames,
    cartan_R,
    cartan_reconstruct,
    epsilon_prime,
    exact_tripod_pants,
    foot_gap,
    g_r,
    g_r_cartan_sweep,
    loglinear_slope,
    margulis_search,
    rho_from_triple,
    tripod_report,
    varpi_foot,
    xi_closed_form,
    xi_harish_chandra,
)


def same(g, h, tol=1e-9):
    return quasi_distance(g, h) <= tol


def test_rotation_identities():
    for a, b in [(0.3, 1.1), (2.0, -4.0), (math.pi, math.pi)]:
        assert same(R(a) @ R(b), R(a + b), 1e-12)
    for t in (0.5, 3.0, -2.0):
        assert same(R(math.pi) @ a_t(t), a_t(-t) @ R(math.pi), 1e-12)


@given(isometries(), st.floats(-20, 20))
def test_frame_step(x, r):
    F = TripodFrames(x, r)
    for k in range(3):
        assert quasi_distance(F.frame(k + 1), F.frame(k) @ g_r(r)) <= 1e-12 * math.exp(abs(r) / 2)


def test_cartan_at_sixty():
    (row,) = g_r_cartan_sweep([60.0])
    assert abs(row.ell - 30 + LOG43) <= 1e-6


def test_cartan_odd_and_reconstructs():
    rows = g_r_cartan_sweep([-12.0, -3.0, 3.0, 12.0])
    assert abs(rows[0].ell + rows[3].ell) < 1e-12
    assert abs(rows[1].ell + rows[2].ell) < 1e-12
    for row, r in zip(rows, (-12.0, -3.0, 3.0, 12.0)):
        assert same(cartan_reconstruct(row), g_r(r), 1e-8 * math.exp(abs(r) / 4))


def test_cartan_of_real_rotation_product():
    g = R(0.4) @ a_t(3.0) @ R(-1.2)
    t1, ell, t2 = cartan_R(g)
    assert abs(ell - 3.0) < 1e-10
    assert same(R(t1 + math.pi) @ a_t(ell) @ R(t2), g, 1e-10)
    assert cartan_R(g, prefer_positive=False)[1] == pytest.approx(-3.0)


def test_triple_relation_and_translation():
    rng = np.random.default_rng(3)
    A = [random_isometry(rng) for _ in range(3)]
    p = rho_from_triple(*A)
    g1, g2, g3 = p.as_tuple()
    assert same(g1 @ g2 @ g3, IDENTITY)
    h = random_isometry(rng)
    q = rho_from_triple(*(h @ a for a in A))
    for u, v in zip(q.as_tuple(), p.as_tuple()):
        assert same(u, v.conj(h), 1e-8)


def test_exact_tripod_futal_and_flat():
    r = 16.0
    _, p = exact_tripod_pants(IDENTITY, IDENTITY, r)
    assert is_futal(p)
    assert is_flat(p, 2 * (r - LOG43), 10 * math.exp(-r / 4))


def test_tripod_report_r40():
    rep = tripod_report(IDENTITY, IDENTITY, 40.0)
    assert rep.futal
    assert rep.sigma_deviation <= 1e-3
    assert max(rep.axis_distances) < 1e-2


def test_tripod_equivariance(rng):
    x, y, g = (random_isometry(rng, 0.5) for _ in range(3))
    r = 12.0
    _, p = exact_tripod_pants(x, y, r)
    _, q = exact_tripod_pants(g @ x, g @ y, r)
    for u, v in zip(q.as_tuple(), p.as_tuple()):
        scale = sum(abs(v) ** 2 for v in u.lift.entries())
        assert same(u, v.conj(g), 1e-12 * scale)
    for s, t in zip(half_lengths_of(p), half_lengths_of(q)):
        assert abs(s - t) < 1e-6


# varpi ---------------------------------------------------------------------


def _gamma(rng):
    return random_isometry(rng) @ a_t(5 + 0.4j) @ random_isometry(rng).inv()


def test_varpi_equivariance(rng):
    for _ in range(5):
        gamma = _gamma(rng)
        x, y, h = (random_isometry(rng, 0.7) for _ in range(3))
        f = varpi_foot(gamma, x, y)
        g = varpi_foot(gamma.conj(h), h @ x, h @ y)
        assert same(g.element, h @ f.element, 1e-8)
        shift = torus_shift(axis(gamma), h)
        assert f.torus.distance(g.position, f.position + shift) < 1e-8


def test_varpi_z_action(rng):
    gamma = _gamma(rng)
    N = normalizer(axis(gamma))
    x, y = random_isometry(rng, 0.7), random_isometry(rng, 0.7)
    f = varpi_foot(gamma, x, y)
    for w in (0.7, -1.3 + 2j):
        z = N.inv() @ a_t(w) @ N
        g = varpi_foot(gamma, z @ x, z @ y)
        assert same(g.element, z @ f.element, 1e-8)
        assert f.torus.distance(g.position, f.position + w) < 1e-8


def test_foot_gap():
    assert foot_gap(IDENTITY, IDENTITY, 40.0) <= 1e-3
    gaps = [foot_gap(IDENTITY, IDENTITY, r, eps=0.1) for r in (20.0, 40.0, 60.0)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_foot_gap_conjugation_invariant(rng):
    h = random_isometry(rng, 0.5)
    a = foot_gap(IDENTITY, IDENTITY, 20.0, eps=0.1)
    b = foot_gap(h, h, 20.0, eps=0.1)
    assert abs(a - b) < 1e-8


# Schottky search -------------------------------------------------------------

ENDS = [(-1.0, 1.0), (6j - 1, 6j + 1)]


def test_schottky_rejects_overlap():
    with pytest.raises(NotSchottky):
        SchottkyGroup.from_axes(ENDS, 0.2)


def _on_axis(G, k):
    return normalizer(axis(G.generators[k])).inv()


@pytest.mark.parametrize("prune", [True, False])
def test_margulis_finds_powers(prune):
    G = SchottkyGroup.from_axes(ENDS, 4.0)
    x = _on_axis(G, 0)
    hits = margulis_search(G, x, 4.0, 0.05, 4, prune=prune)
    assert [h.word for h in hits] == [((0, 1),)]
    hits = margulis_search(G, x, 8.0, 0.05, 4, prune=prune)
    assert [h.word for h in hits] == [((0, 1), (0, 1))]
    for h in hits:
        assert h.error < epsilon_prime(0.05, 8.0)


def test_margulis_pruning_is_exact():
    G = SchottkyGroup.from_axes(ENDS, 4.0)
    x = _on_axis(G, 1)
    for r in (4.0, 6.0, 8.0):
        a = [h.word for h in margulis_search(G, x, r, 0.5, 5, prune=True)]
        b = [h.word for h in margulis_search(G, x, r, 0.5, 5, prune=False)]
        assert a == b


def test_margulis_empty_far_away():
    G = SchottkyGroup.from_axes(ENDS, 4.0)
    x = a_t(2.0) @ normalizer(axis(G.generators[0])).inv() @ a_t(0.3j)
    x = IDENTITY.__class__.from_array(np.array([[1, 40], [0, 1]])) @ x
    assert margulis_search(G, x, 5.0, 1e-6, 4) == []


# Xi --------------------------------------------------------------------------


def test_xi():
    assert abs(xi_harish_chandra(2.0) / xi_closed_form(2.0) - 1) < 1e-8
    assert abs(xi_closed_form(2.0) - float(2 / (mp.pi * mp.sinh(2)))) < 1e-15
    assert abs(xi_harish_chandra(1e-4) - 1 / math.pi) < 1e-6
    rs = np.linspace(10, 30, 21)
    slope = loglinear_slope(rs, [xi_harish_chandra(r) for r in rs])
    assert -1.0 < slope < -0.9
