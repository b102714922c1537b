"""Pairs of pants: holonomy from half-lengths, half-lengths from holonomy, feet.

A marked pants is a triple (g1, g2, g3) of loxodromics with g1 g2 g3 = id.
Positions along an oriented axis are complex numbers zeta = log(height) +
i arg(normal) in the canonical coordinates of :func:`surfacekit.psl2c.normalizer`,
so that diag(e^{zeta/2}, e^{-zeta/2}) carries the base frame to the frame at
zeta.  They are meaningful modulo 2 pi i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from surfacekit._extended import axis_ext, position_ext
from surfacekit.config import tol
from surfacekit.errors import (
    DegenerateHexagon,
    FootInconsistency,
    HalfLengthMismatch,
    NonLoxodromicCuff,
    NotLoxodromic,
    RelationViolated,
    SharedEndpoint,
)
from surfacekit.psl2c import (
    IDENTITY,
    INF,
    Isometry,
    OrientedGeodesic,
    UnitDetMatrix,
    axis,
    boundary_close,
    normalizer,
    perpendicular_position,
    quasi_distance,
    strip,
    translation_length,
)

TWO_PI_I = 2j * math.pi


def half_length(z: complex) -> complex:
    """Validate and normalize a half-length into the canonical strip."""
    z = strip(z)
    if not z.real > 0:
        raise ValueError(f"half-length needs positive real part, got {z}")
    return z


# ---------------------------------------------------------------------------
# cuff tori


@dataclass(frozen=True)
class CuffTorus:
    """C / (sigma Z + 2 pi i Z) with its flat metric."""

    sigma: complex

    def __post_init__(self):
        object.__setattr__(self, "sigma", half_length(self.sigma))

    def _coords(self, z: complex) -> tuple[float, float]:
        # z = x sigma + y 2 pi i
        s = self.sigma
        x = z.real / s.real
        y = (z.imag - x * s.imag) / (2 * math.pi)
        return x, y

    def reduce(self, z: complex) -> complex:
        x, y = self._coords(complex(z))
        fx, fy = math.floor(x), math.floor(y)
        out = complex(z) - fx * self.sigma - fy * TWO_PI_I
        # guard against x - floor(x) rounding up to exactly 1
        x2, y2 = self._coords(out)
        if x2 >= 1.0:
            out -= self.sigma
        if y2 >= 1.0:
            out -= TWO_PI_I
        return out

    def nearest(self, z: complex, target: complex = 0j) -> complex:
        """Representative of the class of z closest to target."""
        d = complex(z) - complex(target)
        x, y = self._coords(d)
        rx, ry = round(x), round(y)
        best = None
        for i in (rx - 1, rx, rx + 1):
            for j in (ry - 1, ry, ry + 1):
                cand = d - i * self.sigma - j * TWO_PI_I
                if best is None or abs(cand) < abs(best):
                    best = cand
        # one more sweep handles skewed lattices where the +-1 box is not enough
        changed = True
        while changed:
            changed = False
            for v in (self.sigma, TWO_PI_I, self.sigma + TWO_PI_I, self.sigma - TWO_PI_I):
                for cand in (best - v, best + v):
                    if abs(cand) < abs(best) - 1e-15:
                        best, changed = cand, True
        return best + complex(target)

    def distance(self, z: complex, w: complex) -> float:
        return abs(self.nearest(complex(z) - complex(w)))

    def diameter(self) -> float:
        """Largest distance from the origin class (covering radius)."""
        s = self.sigma
        corners = [0.5 * s, 0.5 * TWO_PI_I, 0.5 * (s + TWO_PI_I), 0.5 * (s - TWO_PI_I)]
        # the covering radius is attained at a circumcenter of a Delaunay triangle
        best = max(abs(self.nearest(c)) for c in corners)
        for a, b in ((s, TWO_PI_I), (s, s + TWO_PI_I), (TWO_PI_I, s - TWO_PI_I)):
            cc = _circumcenter(0j, a, b)
            if cc is not None:
                best = max(best, abs(self.nearest(cc)))
        return best

    def area(self) -> float:
        return abs(self.sigma.real * 2 * math.pi)


def _circumcenter(p, q, r):
    ax, ay, bx, by, cx, cy = p.real, p.imag, q.real, q.imag, r.real, r.imag
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-300:
        return None
    ux = ((ax**2 + ay**2) * (by - cy) + (bx**2 + by**2) * (cy - ay) + (cx**2 + cy**2) * (ay - by)) / d
    uy = ((ax**2 + ay**2) * (cx - bx) + (bx**2 + by**2) * (ax - cx) + (cx**2 + cy**2) * (bx - ax)) / d
    return complex(ux, uy)


@dataclass(frozen=True)
class Foot:
    torus: CuffTorus
    position: complex

    def __post_init__(self):
        object.__setattr__(self, "position", self.torus.reduce(self.position))

    def distance(self, other: "Foot") -> float:
        return self.torus.distance(self.position, other.position)


# ---------------------------------------------------------------------------
# marked pants


@dataclass(frozen=True, eq=False)
class MarkedPants:
    gamma1: Isometry
    gamma2: Isometry
    gamma3: Isometry

    def __post_init__(self):
        validate_relation(self.as_tuple())
        axes = []
        for g in self.as_tuple():
            try:
                axes.append(axis(g))
            except NotLoxodromic as e:
                raise NonLoxodromicCuff(str(e)) from None
        pts = [p for a in axes for p in (a.source, a.target)]
        for i in range(6):
            for j in range(i + 1, 6):
                if boundary_close(pts[i], pts[j]):
                    raise SharedEndpoint("axis endpoints of a marked pants must be distinct")

    def as_tuple(self) -> tuple:
        return (self.gamma1, self.gamma2, self.gamma3)

    def __getitem__(self, i: int) -> Isometry:
        return self.as_tuple()[i]

    def conj(self, h: Isometry) -> "MarkedPants":
        return MarkedPants(*(g.conj(h) for g in self.as_tuple()))

    def axes(self) -> tuple:
        return tuple(axis(g) for g in self.as_tuple())


def relation_residual(t) -> float:
    g1, g2, g3 = t
    return quasi_distance(IDENTITY, g1 @ g2 @ g3)


def validate_relation(t) -> None:
    if relation_residual(t) > tol().relation * max(1.0, _scale(t)):
        raise RelationViolated("gamma1 gamma2 gamma3 != id")


def _scale(t) -> float:
    # rounding in g1 g2 g3 is bounded by a small multiple of u |g1||g2||g3|
    s = 1.0
    for g in t:
        s *= max(abs(x) for x in g.lift.entries())
    return max(1.0, 16 * 2.2e-16 * s / tol().relation)


def triple_involution(t):
    """R(g1, g2, g3) = (g1^-1, g3^-1, g2^-1)."""
    g1, g2, g3 = t.as_tuple() if isinstance(t, MarkedPants) else t
    out = (g1.inv(), g3.inv(), g2.inv())
    validate_relation(out)
    return MarkedPants(*out) if isinstance(t, MarkedPants) else out


def triple_rot(t):
    """rot(g1, g2, g3) = (g2, g3, g1)."""
    g1, g2, g3 = t.as_tuple() if isinstance(t, MarkedPants) else t
    out = (g2, g3, g1)
    validate_relation(out)
    return MarkedPants(*out) if isinstance(t, MarkedPants) else out


# ---------------------------------------------------------------------------
# construction


def pants_rep_lifts(s1: complex, s2: complex, s3: complex) -> tuple:
    """SL(2, C) lifts (M1, M2, M3) with M1 M2 M3 = I and trace Mn = -2 cosh sn."""
    s1, s2, s3 = (half_length(s) for s in (s1, s2, s3))
    e1 = cmath.exp(s1)
    m1 = (-e1, 0j, 0j, -1 / e1)
    t2 = -2 * cmath.cosh(s2)
    t3 = 2 * cmath.cosh(s3)  # tr(M1 M2) = -(e1 a + d / e1) must equal -2 cosh s3
    a = (t3 - t2 / e1) / (e1 - 1 / e1)
    d = t2 - a
    bc = a * d - 1
    scale = max(1.0, abs(a * d))
    if abs(bc) <= 1e-13 * scale:
        raise DegenerateHexagon("axes of M1 and M2 share an endpoint")
    c = cmath.sqrt(-bc)
    b = -c
    # fixed points of M2 satisfy p q = -b / c = 1; put the perpendicular foot at +1
    m2 = UnitDetMatrix(a, b, c, d)
    g2 = Isometry(m2)
    try:
        zeta = perpendicular_position(OrientedGeodesic(0j, INF), axis(g2))
    except NotLoxodromic as e:
        raise NonLoxodromicCuff(str(e)) from None
    if abs(strip(zeta).imag) > math.pi / 2:
        m2 = UnitDetMatrix(a, -b, -c, d)
    M1 = UnitDetMatrix(*m1)
    M3 = (M1 @ m2).inv()
    return M1, m2, M3


def pants_rep(s1: complex, s2: complex, s3: complex) -> MarkedPants:
    lifts = pants_rep_lifts(s1, s2, s3)
    return MarkedPants(*(Isometry(m) for m in lifts))


def perpendicular_feet(p: MarkedPants, n: int) -> tuple:
    """((zeta_minus, m_minus), (zeta_plus, m_plus)) along the axis of cuff n.

    ``m_minus``/``m_plus`` are the indices of the cuffs the two perpendiculars
    go to; positions are in the canonical coordinates of axis(gamma_n).
    """
    gs = p.as_tuple()
    axes = [axis_ext(g) for g in gs]
    eps = tol().intersect
    a, b = (n + 1) % 3, (n + 2) % 3
    za = position_ext(axes[n], axes[a], eps)
    zb = position_ext(axes[n], axes[b], eps)
    return ((za, a), (zb, b)) if za.real <= zb.real else ((zb, b), (za, a))


def _positions(p: MarkedPants, n: int) -> tuple[complex, complex]:
    lo, hi = perpendicular_feet(p, n)
    return lo[0], hi[0]


def half_lengths_of(p: MarkedPants) -> tuple:
    out = []
    for n in range(3):
        lo, hi = _positions(p, n)
        out.append(strip(hi - lo))
    return tuple(out)


def _branch_offset(sigma: complex, ell: complex) -> float:
    """|sigma - ell/2| modulo 2 pi i (0 on the futal branch, pi on the other)."""
    return abs(strip(sigma - ell / 2))


def is_futal(p: MarkedPants) -> bool:
    sig = half_lengths_of(p)
    for n, g in enumerate(p.as_tuple()):
        if _branch_offset(sig[n], translation_length(g)) > tol().futal_branch:
            return False
    return True


def check_futal(p: MarkedPants) -> tuple:
    """Half-lengths of p, raising HalfLengthMismatch off the futal branch."""
    sig = half_lengths_of(p)
    for n, g in enumerate(p.as_tuple()):
        off = _branch_offset(sig[n], translation_length(g))
        if off > tol().futal_branch:
            raise HalfLengthMismatch(f"cuff {n + 1}: sigma differs from ell/2 by {off:.3g} mod 2 pi i")
    return sig


def cuff_torus(g: Isometry) -> CuffTorus:
    return CuffTorus(translation_length(g) / 2)


def foot(p: MarkedPants) -> Foot:
    """Foot of the marked cuff, in the canonical coordinates of axis(gamma1)."""
    sigma = translation_length(p.gamma1) / 2
    lo, hi = _positions(p, 0)
    gap = abs(strip(hi - lo - sigma))
    if gap > tol().foot * max(1.0, abs(sigma)):
        raise FootInconsistency(f"A+ != A_sigma A- (mismatch {gap:.3g})")
    return Foot(CuffTorus(sigma), lo)


def foot_identity_residual(p: MarkedPants) -> float:
    sigma = translation_length(p.gamma1) / 2
    lo, hi = _positions(p, 0)
    return abs(strip(hi - lo - sigma))


def torus_shift(geo: OrientedGeodesic, h: Isometry) -> complex:
    """Offset c with position_{h geo}(h x) = position_geo(x) + c."""
    m = normalizer(geo.image(h)) @ h @ normalizer(geo).inv()
    a = m.lift.a
    return 2 * cmath.log(a)


def is_flat(p: MarkedPants, R: float, eps: float) -> bool:
    return all(abs(s - R / 2) <= eps for s in check_futal(p))
