"""PSL(2, C) acting on the upper half-space model of H^3.

Points of H^3 are pairs ``(z, t)`` with ``t > 0``; the boundary is the
Riemann sphere, with :data:`INF` as a first-class point.  Matrices are kept at
determinant one and isometries are matrices modulo sign, with a canonical
choice of sign so that equality and trace reporting are deterministic.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Union

import numpy as np

from surfacekit.config import tol
from surfacekit.errors import IntersectingAxes, NotLoxodromic, SharedEndpoint


class _Infinity:
    """The point at infinity of the Riemann sphere (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
BoundaryPoint = Union[complex, _Infinity]


def is_inf(p) -> bool:
    return p is INF


_ROUND = 64 * sys.float_info.epsilon


def _quotient(num: complex, den: complex):
    """num / den as a boundary point; overflow (tiny den) lands on INF."""
    if den == 0:
        return INF
    z = num / den
    return z if cmath.isfinite(z) else INF


def boundary_close(p, q, rel: float | None = None) -> bool:
    """Chordal closeness of two boundary points."""
    rel = tol().endpoint if rel is None else rel
    return chordal(p, q) <= rel


def chordal(p, q) -> float:
    if p is INF and q is INF:
        return 0.0
    if p is INF:
        return 2.0 / math.sqrt(1.0 + abs(q) ** 2)
    if q is INF:
        return 2.0 / math.sqrt(1.0 + abs(p) ** 2)
    if abs(p) > 1.0 and abs(q) > 1.0:
        p, q = 1.0 / p, 1.0 / q  # z -> 1/z is a chordal isometry; avoids overflow
    return 2.0 * abs(p - q) / (math.hypot(1.0, abs(p)) * math.hypot(1.0, abs(q)))


def phase(z: complex) -> float:
    # cmath.phase raises on subnormal parts; math.atan2 does not
    return math.atan2(z.imag, z.real)


def wrap_angle(x: float) -> float:
    """Reduce a real angle into (-pi, pi]."""
    y = math.remainder(x, 2.0 * math.pi)
    if y <= -math.pi:
        y += 2.0 * math.pi
    return y


def strip(z: complex) -> complex:
    """Canonical representative of z modulo 2 pi i: imaginary part in (-pi, pi]."""
    z = complex(z)
    return complex(z.real, wrap_angle(z.imag))


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class UnitDetMatrix:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if not cmath.isfinite(det):
            raise ValueError("matrix entries are not finite")
        # rescale only when det is off by more than its own rounding error;
        # rescaling a matrix whose det is 1 up to rounding destroys exact
        # cancellation in M adj(M)
        if abs(det - 1.0) > tol().det * max(1.0, abs(a * d), abs(b * c)):
            if det == 0:
                raise ValueError("matrix is singular")
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v)

    def __matmul__(self, o: "UnitDetMatrix") -> "UnitDetMatrix":
        return UnitDetMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inv(self) -> "UnitDetMatrix":
        return UnitDetMatrix(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "UnitDetMatrix":
        return UnitDetMatrix(-self.a, -self.b, -self.c, -self.d)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def to_numpy(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)


def _canonical_sign(a, b, c, d) -> int:
    tr = a + d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    eps = 1e-14 * scale
    if abs(tr.real) > eps:
        return 1 if tr.real > 0 else -1
    if abs(tr.imag) > eps:
        return 1 if tr.imag > 0 else -1
    for v in (a, b, c, d):
        if abs(v) > eps:
            ang = phase(v)
            return 1 if -math.pi / 2 < ang <= math.pi / 2 else -1
    return 1


@dataclass(frozen=True, eq=False)
class Isometry:
    """Orientation-preserving isometry of H^3: a unit-determinant matrix up to sign."""

    lift: UnitDetMatrix

    def __post_init__(self):
        m = self.lift
        if not isinstance(m, UnitDetMatrix):
            m = UnitDetMatrix(*m)
        if _canonical_sign(*m.entries()) < 0:
            m = -m
        object.__setattr__(self, "lift", m)

    @classmethod
    def of(cls, a, b, c, d) -> "Isometry":
        return cls(UnitDetMatrix(a, b, c, d))

    @classmethod
    def from_array(cls, arr) -> "Isometry":
        arr = np.asarray(arr, dtype=complex)
        return cls.of(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1])

    # group structure
    def __matmul__(self, o: "Isometry") -> "Isometry":
        return Isometry(self.lift @ o.lift)

    def inv(self) -> "Isometry":
        return Isometry(self.lift.inv())

    def __pow__(self, n: int) -> "Isometry":
        if n < 0:
            return self.inv() ** (-n)
        out = IDENTITY
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def conj(self, h: "Isometry") -> "Isometry":
        """h self h^-1."""
        return h @ self @ h.inv()

    @property
    def trace(self) -> complex:
        return self.lift.trace

    def isclose(self, o: "Isometry", atol: float | None = None) -> bool:
        atol = tol().equality if atol is None else atol
        return quasi_distance(self, o) <= atol

    def __eq__(self, o) -> bool:
        if not isinstance(o, Isometry):
            return NotImplemented
        return self.isclose(o)

    __hash__ = None

    # actions
    def __call__(self, p):
        """Act on a boundary point or an :class:`H3Point`."""
        if isinstance(p, H3Point):
            return act_h3(self, p)
        return mobius(self, p)

    def __repr__(self):
        a, b, c, d = self.lift.entries()
        return f"Isometry([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


IDENTITY = Isometry.of(1, 0, 0, 1)


def a_t(t: complex) -> Isometry:
    """Translation along (0, INF); complex t adds a rotation by Im t."""
    h = cmath.exp(complex(t) / 2)
    return Isometry.of(h, 0, 0, 1 / h)


def mobius(g: Isometry, z):
    a, b, c, d = g.lift.entries()
    if z is INF:
        return _quotient(a, c)
    return _quotient(a * z + b, c * z + d)


# ---------------------------------------------------------------------------
# upper half-space


@dataclass(frozen=True)
class H3Point:
    z: complex
    t: float

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "t", float(self.t))
        if not self.t > 0:
            raise ValueError("H3Point requires t > 0")


P0 = H3Point(0j, 1.0)


def h3_distance(p: H3Point, q: H3Point) -> float:
    num = abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2
    return 2.0 * math.asinh(math.sqrt(num / (4.0 * p.t * q.t)))


def act_h3(g: Isometry, p: H3Point) -> H3Point:
    a, b, c, d = g.lift.entries()
    z, t = p.z, p.t
    czd = c * z + d
    den = abs(czd) ** 2 + abs(c) ** 2 * t * t
    zz = ((a * z + b) * czd.conjugate() + a * c.conjugate() * t * t) / den
    return H3Point(zz, t / den)


# Quaternions q = w + x i + y j + k k stored as 4-tuples; a point (z, t) of H^3
# is z + t j, a tangent vector (v1, v2, v3) is v1 + v2 i + v3 j.


def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def _qinv(q):
    n = sum(x * x for x in q)
    return (q[0] / n, -q[1] / n, -q[2] / n, -q[3] / n)


def _cq(z: complex):
    return (z.real, z.imag, 0.0, 0.0)


def push_vector(g: Isometry, p: H3Point, v) -> tuple:
    """Differential of g at p applied to the Euclidean vector v = (x, y, s)."""
    a, b, c, d = g.lift.entries()
    q = (p.z.real, p.z.imag, p.t, 0.0)
    gq = act_h3(g, p)
    gqq = (gq.z.real, gq.z.imag, gq.t, 0.0)
    left = tuple(x - y for x, y in zip(_cq(a), _qmul(gqq, _cq(c))))
    right = _qinv(tuple(x + y for x, y in zip(_qmul(_cq(c), q), _cq(d))))
    w = _qmul(_qmul(left, (v[0], v[1], v[2], 0.0)), right)
    return (w[0], w[1], w[2])


@dataclass(frozen=True)
class Frame:
    """A point with three Euclidean tangent vectors, hyperbolically orthonormal."""

    point: H3Point
    u: tuple
    n: tuple
    w: tuple

    def gram(self) -> np.ndarray:
        vs = np.array([self.u, self.n, self.w]) / self.point.t
        return vs @ vs.T


BASE_FRAME = Frame(P0, (0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))


def frame_apply(g: Isometry, seed: Frame = BASE_FRAME) -> Frame:
    """Image of a frame (by default the base frame at p0) under g."""
    p = seed.point
    return Frame(
        act_h3(g, p),
        push_vector(g, p, seed.u),
        push_vector(g, p, seed.n),
        push_vector(g, p, seed.w),
    )


# ---------------------------------------------------------------------------
# loxodromics


@dataclass(frozen=True)
class OrientedGeodesic:
    source: BoundaryPoint
    target: BoundaryPoint

    def __post_init__(self):
        for name in ("source", "target"):
            v = getattr(self, name)
            if v is not INF:
                object.__setattr__(self, name, complex(v))
        if boundary_close(self.source, self.target, 0.0):
            raise ValueError("geodesic endpoints must be distinct")

    def reversed(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.target, self.source)

    def image(self, g: Isometry) -> "OrientedGeodesic":
        return OrientedGeodesic(mobius(g, self.source), mobius(g, self.target))

    def isclose(self, o: "OrientedGeodesic", rel: float | None = None) -> bool:
        return boundary_close(self.source, o.source, rel) and boundary_close(
            self.target, o.target, rel
        )


def _big_eigenvalue(g: Isometry) -> complex:
    tr = g.trace
    s = cmath.sqrt(tr * tr - 4)
    if (tr.conjugate() * s).real < 0:
        s = -s
    return (tr + s) / 2


def is_loxodromic(g: Isometry) -> bool:
    return math.log(abs(_big_eigenvalue(g))) > tol().loxodromic


def translation_length(g: Isometry) -> complex:
    """Complex translation length: real part > 0, imaginary part in (-pi, pi]."""
    lam = _big_eigenvalue(g)
    re = 2.0 * math.log(abs(lam))
    if not re > 2.0 * tol().loxodromic:
        raise NotLoxodromic(f"trace {g.trace} is not loxodromic")
    return complex(re, wrap_angle(2.0 * phase(lam)))


def _fixed_point(g: Isometry, lam: complex):
    # eigenvector of lam from whichever row of (M - lam) is larger; lam - a
    # is only known to rounding, so fall back on the exact entry c
    a, b, c, d = g.lift.entries()
    r1 = abs(a - lam) ** 2 + abs(b) ** 2
    r2 = abs(c) ** 2 + abs(d - lam) ** 2
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(lam))
    if r1 >= r2 and abs(lam - a) > _ROUND * scale:
        return _quotient(b, lam - a)
    return _quotient(lam - d, c)


def axis(g: Isometry) -> OrientedGeodesic:
    """Axis oriented from the repelling to the attracting fixed point."""
    lam = _big_eigenvalue(g)
    if not math.log(abs(lam)) > tol().loxodromic:
        raise NotLoxodromic(f"trace {g.trace} is not loxodromic")
    return OrientedGeodesic(_fixed_point(g, 1 / lam), _fixed_point(g, lam))


def normalizer(geo: OrientedGeodesic) -> Isometry:
    """Canonical N sending geo.source to 0 and geo.target to INF."""
    a, b = geo.source, geo.target
    if b is INF:
        return Isometry.of(1, -a, 0, 1)
    if a is INF:
        return Isometry.of(0, -1, 1, -b)
    s = cmath.sqrt(a - b)
    return Isometry.of(1 / s, -a / s, 1 / s, -b / s)


# ---------------------------------------------------------------------------
# common perpendiculars


def _normalized_pair(geo: OrientedGeodesic, other: OrientedGeodesic):
    """Endpoints of `other` in the coordinates where geo = (0, INF)."""
    for x in (other.source, other.target):
        for y in (geo.source, geo.target):
            if boundary_close(x, y):
                raise SharedEndpoint("geodesics share an endpoint")
    n = normalizer(geo)
    p, q = mobius(n, other.source), mobius(n, other.target)
    if p is INF or q is INF or p == 0 or q == 0:
        raise SharedEndpoint("geodesics share an endpoint")
    return n, p, q


def perpendicular_position(geo: OrientedGeodesic, other: OrientedGeodesic) -> complex:
    """log(height) + i arg(normal) of the perpendicular foot on geo toward other.

    Coordinates are those of :func:`normalizer` (geo sent to (0, INF)); the
    value is defined modulo 2 pi i.
    """
    _, p, q = _normalized_pair(geo, other)
    v = cmath.sqrt(p * q)
    u = p / v
    if abs(u.real) <= tol().intersect * abs(u):
        raise IntersectingAxes("geodesics intersect")
    if u.real < 0:
        v = -v
    return cmath.log(v)


@dataclass(frozen=True)
class Perpendicular:
    foot1: H3Point
    foot2: H3Point
    dir1: tuple   # at foot1, toward foot2
    dir2: tuple   # at foot2, toward foot1
    length: float


def common_perpendicular(g1: OrientedGeodesic, g2: OrientedGeodesic) -> Perpendicular:
    n, p, q = _normalized_pair(g1, g2)
    w = cmath.sqrt(p * q)
    u = p / w
    if abs(u.real) <= tol().intersect * abs(u):
        raise IntersectingAxes("geodesics intersect")
    sgn = 1.0 if u.real > 0 else -1.0
    au = abs(u)
    x = 2.0 * u.real / (au * au + 1.0)  # signed, in coordinates scaled by w
    t = math.sqrt(max(0.0, 1.0 - x * x))
    aw = abs(w)
    f1 = H3Point(0j, aw)
    f2 = H3Point(x * w, t * aw)
    d1 = (sgn * w.real, sgn * w.imag, 0.0)
    h = -sgn * t * t * w
    d2 = (h.real, h.imag, abs(x) * t * aw)
    ninv = n.inv()
    return Perpendicular(
        act_h3(ninv, f1),
        act_h3(ninv, f2),
        _unit(push_vector(ninv, f1, d1), act_h3(ninv, f1)),
        _unit(push_vector(ninv, f2, d2), act_h3(ninv, f2)),
        math.atanh(min(abs(x), 1.0)),
    )


def _unit(v, p: H3Point):
    s = math.sqrt(sum(x * x for x in v)) / p.t
    return tuple(x / s for x in v)


# ---------------------------------------------------------------------------
# Cartan decomposition and the quasi-distance


@dataclass(frozen=True)
class CartanTriple:
    """g = k1 a_t k2 with k1, k2 fixing p0.

    ``theta1``/``theta2`` are the rotation angles of ``k1``/``k2`` in [0, 2 pi].
    """

    theta1: float
    t: float
    theta2: float
    k1: Isometry
    k2: Isometry

    def reconstruct(self) -> Isometry:
        return self.k1 @ a_t(self.t) @ self.k2


def _rotation_angle(k: Isometry) -> float:
    c = max(-1.0, min(1.0, k.trace.real / 2))
    return 2.0 * math.acos(c)


def _su2(m: np.ndarray) -> Isometry:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return Isometry.from_array(m / np.sqrt(det))


def cartan_kak(g: Isometry) -> CartanTriple:
    m = g.lift.to_numpy()
    u, _, _ = np.linalg.svd(m)
    # t from the distance formula rather than log of a singular value
    t = h3_distance(act_h3(g, P0), P0)
    if t <= 1e-14:
        return CartanTriple(_rotation_angle(g), 0.0, 0.0, g, IDENTITY)
    k1 = _su2(u)
    k2 = a_t(-t) @ k1.inv() @ g
    return CartanTriple(_rotation_angle(k1), t, _rotation_angle(k2), k1, k2)


def frobenius_to_identity(m: UnitDetMatrix) -> float:
    a, b, c, d = m.entries()
    plus = abs(a - 1) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d - 1) ** 2
    minus = abs(a + 1) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d + 1) ** 2
    return math.sqrt(min(plus, minus))


def quasi_distance(g: Isometry, h: Isometry) -> float:
    """min over lifts of ||g^-1 h - I||_F: left invariant and K-conjugation invariant."""
    return frobenius_to_identity(g.lift.inv() @ h.lift)


def quasi_distance_diagonal(t: float) -> float:
    """Closed form of quasi_distance(id, a_t) for real t."""
    return math.hypot(math.exp(t / 2) - 1, math.exp(-t / 2) - 1)
