import math

import pytest
from hypothesis import given

from conftest import half_lengths, isometries
from surfacekit.errors import HalfLengthMismatch, RelationViolated
from surfacekit.pants import (
    CuffTorus,
    MarkedPants,
    check_futal,
    foot,
    foot_identity_residual,
    half_lengths_of,
    is_flat,
    is_futal,
    pants_rep,
    relation_residual,
    torus_shift,
    triple_involution,
    triple_rot,
)
from surfacekit.psl2c import a_t, axis, boundary_close, strip


def close(a, b, tol=1e-9):
    return abs(strip(a - b)) <= tol * max(1.0, abs(b))


def test_round_trip_equal():
    p = pants_rep(2, 2, 2)
    assert all(close(s, 2) for s in half_lengths_of(p))


def test_real_entries():
    p = pants_rep(1.5, 2.0, 2.5)
    for g in p.as_tuple():
        assert all(abs(v.imag) < 1e-12 for v in g.lift.entries())


def test_is_flat_examples():
    R = 8.0
    assert is_flat(pants_rep(R / 2, R / 2, R / 2), R, 1e-9)
    eps = 0.01
    assert not is_flat(pants_rep(R / 2 + 2 * eps, R / 2, R / 2), R, eps)


def test_twisted_branch_is_not_futal():
    # the other hexagon branch on cuff 1: feet give sigma + i pi, not ell / 2
    p = pants_rep(2 - 0.05j + 1j * math.pi, 2, 2)
    assert not is_futal(p)
    with pytest.raises(HalfLengthMismatch):
        check_futal(p)
    assert is_futal(pants_rep(2, 2, 2))


def test_foot_normalization_and_rot():
    p = pants_rep(3, 2 + 0.2j, 2.5)
    f = foot(p)
    assert f.torus.distance(f.position, 0) < 1e-9
    q = triple_rot(triple_rot(triple_rot(p)))
    assert foot(q).distance(f) < 1e-9


def test_foot_shift_along_axis():
    p = pants_rep(3, 2 + 0.2j, 2.5)
    w = 0.7 + 1.1j
    q = p.conj(a_t(w))
    assert foot(q).torus.distance(foot(q).position, foot(p).position + w) < 1e-9


def test_relation_violation():
    p = pants_rep(2, 2, 2)
    with pytest.raises(RelationViolated):
        MarkedPants(p.gamma1, p.gamma2, p.gamma3 @ a_t(0.1))


def test_triple_identities():
    p = pants_rep(2, 3, 2.5)
    rr = triple_involution(triple_involution(p))
    assert all(a == b for a, b in zip(rr.as_tuple(), p.as_tuple()))
    r3 = triple_rot(triple_rot(triple_rot(p)))
    assert all(a == b for a, b in zip(r3.as_tuple(), p.as_tuple()))
    assert relation_residual(triple_involution(p).as_tuple()) < 1e-10


def test_marking_under_R():
    p = pants_rep(2, 3, 2.5)
    a, b = axis(p.gamma1), axis(triple_involution(p).gamma1)
    assert boundary_close(a.source, b.target) and boundary_close(a.target, b.source)


def test_torus_reduce_idempotent():
    T = CuffTorus(3 + 0.4j)
    for z in (0.3 + 7j, -5 - 2j, 11 + 0.1j):
        r = T.reduce(z)
        assert T.reduce(r) == r
        assert T.distance(z, r) < 1e-12


@given(half_lengths, half_lengths, half_lengths)
def test_round_trip(s1, s2, s3):
    p = pants_rep(s1, s2, s3)
    for got, want in zip(half_lengths_of(p), (s1, s2, s3)):
        assert abs(strip(got - want)) <= 1e-9 * max(1.0, abs(want)) * 10  # conditioning
    assert relation_residual(p.as_tuple()) <= 1e-10
    assert foot_identity_residual(p) <= 1e-8


@given(half_lengths, half_lengths, half_lengths, isometries())
def test_conjugation(s1, s2, s3, h):
    p = pants_rep(s1, s2, s3)
    q = p.conj(h)
    assert is_futal(q) == is_futal(p)
    for a, b in zip(half_lengths_of(q), half_lengths_of(p)):
        assert abs(strip(a - b)) <= 1e-7 * max(1.0, abs(b))
    shift = torus_shift(axis(p.gamma1), h)
    f, g = foot(p), foot(q)
    assert f.torus.distance(f.position + shift, g.position) <= 1e-7
