"""Perpendicular positions evaluated in extended (80-bit) precision.

Thin pants make the feet ill-conditioned functions of the matrix entries: a
rounding error of one ulp in the recovery pipeline can move a half-length by
1e-9.  Evaluating the few steps from matrices to positions in long double
removes the pipeline's own contribution, leaving only the conditioning of the
double-precision input.
"""

from __future__ import annotations

import numpy as np

from surfacekit.errors import IntersectingAxes, SharedEndpoint

CL = np.clongdouble
_ZERO = CL(0)
_EPS = 64 * np.finfo(np.float64).eps  # inputs are doubles


def _entries(g):
    m = g.lift
    return CL(m.a), CL(m.b), CL(m.c), CL(m.d)


def _fixed(a, b, c, d, lam):
    r1 = abs(a - lam) ** 2 + abs(b) ** 2
    r2 = abs(c) ** 2 + abs(d - lam) ** 2
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(lam))
    # lam - a is only known to rounding; c is exact, so prefer it then
    if r1 >= r2 and abs(lam - a) > _EPS * scale:
        return b / (lam - a)
    if c == 0:
        return None  # infinity
    return (lam - d) / c


def axis_ext(g):
    a, b, c, d = _entries(g)
    tr = a + d
    s = np.sqrt(tr * tr - 4)
    if (np.conj(tr) * s).real < 0:
        s = -s
    lam = (tr + s) / 2
    return _fixed(a, b, c, d, 1 / lam), _fixed(a, b, c, d, lam)


def _normalize(src, tgt, z):
    """Canonical normalizer of (src, tgt) applied to z (None means infinity)."""
    if tgt is None:
        return None if z is None else z - src
    if src is None:
        return _ZERO if z is None else -1 / (z - tgt)
    if z is None:
        return CL(1)
    den = z - tgt
    if den == 0:
        return None
    return (z - src) / den


def position_ext(ax, other, intersect_tol: float) -> complex:
    src, tgt = ax
    p = _normalize(src, tgt, other[0])
    q = _normalize(src, tgt, other[1])
    if p is None or q is None or p == 0 or q == 0:
        raise SharedEndpoint("geodesics share an endpoint")
    v = np.sqrt(p * q)
    u = p / v
    if abs(u.real) <= intersect_tol * abs(u):
        raise IntersectingAxes("geodesics intersect")
    if u.real < 0:
        v = -v
    return complex(np.log(v))
