"""Arbitrary-precision versions of the few steps the tripod sweeps need.

At r ~ 30 the cuff axes of a tripod pants have endpoints e^-r apart, below
double resolution.  Matrices here are 4-tuples of mpmath complex numbers.
"""

from __future__ import annotations

import mpmath as mp

from surfacekit.errors import IntersectingAxes, SharedEndpoint


def mat(g) -> tuple:
    """From an Isometry (double entries)."""
    return tuple(mp.mpc(v) for v in g.lift.entries())


def mul(*ms) -> tuple:
    a, b, c, d = ms[0]
    for e, f, g, h in ms[1:]:
        a, b, c, d = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
    return a, b, c, d


def inv(m) -> tuple:
    a, b, c, d = m
    return d, -b, -c, a


def a_t(t) -> tuple:
    h = mp.exp(mp.mpc(t) / 2)
    return h, mp.mpc(0), mp.mpc(0), 1 / h


def R(theta) -> tuple:
    c, s = mp.cos(mp.mpf(theta) / 2), mp.sin(mp.mpf(theta) / 2)
    return mp.mpc(c), mp.mpc(0, -s), mp.mpc(0, -s), mp.mpc(c)


def _big(m):
    a, b, c, d = m
    tr = a + d
    s = mp.sqrt(tr * tr - 4)
    if mp.re(mp.conj(tr) * s) < 0:
        s = -s
    return (tr + s) / 2


def strip(z):
    im = mp.im(z)
    k = mp.floor((mp.pi - im) / (2 * mp.pi))
    return mp.mpc(mp.re(z), im + 2 * mp.pi * k)


def translation_length(m):
    lam = _big(m)
    return strip(2 * mp.log(lam))


def _fixed(m, lam):
    a, b, c, d = m
    r1 = abs(a - lam) ** 2 + abs(b) ** 2
    r2 = abs(c) ** 2 + abs(d - lam) ** 2
    num, den = (b, lam - a) if r1 >= r2 else (lam - d, c)
    return None if den == 0 else num / den


def axis(m) -> tuple:
    lam = _big(m)
    return _fixed(m, 1 / lam), _fixed(m, lam)


def normalizer(ax) -> tuple:
    src, tgt = ax
    if tgt is None:
        return mp.mpc(1), -src, mp.mpc(0), mp.mpc(1)
    if src is None:
        return mp.mpc(0), mp.mpc(-1), mp.mpc(1), -tgt
    s = mp.sqrt(src - tgt)
    return 1 / s, -src / s, 1 / s, -tgt / s


def mobius(m, z):
    a, b, c, d = m
    if z is None:
        return None if c == 0 else a / c
    den = c * z + d
    return None if den == 0 else (a * z + b) / den


def position(ax, other) -> mp.mpc:
    N = normalizer(ax)
    p, q = mobius(N, other[0]), mobius(N, other[1])
    if p is None or q is None or p == 0 or q == 0:
        raise SharedEndpoint("geodesics share an endpoint")
    v = mp.sqrt(p * q)
    u = p / v
    if abs(mp.re(u)) <= mp.mpf(10) ** (-mp.mp.dps + 5) * abs(u):
        raise IntersectingAxes("geodesics intersect")
    if mp.re(u) < 0:
        v = -v
    return mp.log(v)


def feet(gs, n: int) -> tuple:
    """(lo, hi) perpendicular positions on the axis of gs[n]."""
    axes = [axis(g) for g in gs]
    za = position(axes[n], axes[(n + 1) % 3])
    zb = position(axes[n], axes[(n + 2) % 3])
    return (za, zb) if mp.re(za) <= mp.re(zb) else (zb, za)


def half_lengths(gs) -> tuple:
    out = []
    for n in range(3):
        lo, hi = feet(gs, n)
        out.append(strip(hi - lo))
    return tuple(out)


def act_p0(m) -> tuple:
    """Image (z, t) of p0 = (0, 1) in the upper half space model."""
    a, b, c, d = m
    den = abs(c) ** 2 + abs(d) ** 2
    return (b * mp.conj(d) + a * mp.conj(c)) / den, 1 / den


def axis_distance(ax, m) -> mp.mpf:
    """Hyperbolic distance from m p0 to the geodesic ax."""
    N = normalizer(ax)
    z, t = act_p0(mul(N, m))
    return mp.asinh(abs(z) / t)
