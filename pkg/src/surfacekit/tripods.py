"""Frames, tripods, and the pants they produce.

A frame is an element x of PSL(2, C), acting on the base frame at p0.
R_theta rotates about the geodesic through p0 in direction n0 and a_t
translates along the u0-geodesic (0, INF).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from surfacekit import _mp
from surfacekit.errors import NotSchottky
from surfacekit.pants import (
    CuffTorus,
    MarkedPants,
)
from surfacekit.psl2c import (
    INF,
    IDENTITY,
    P0,
    H3Point,
    Isometry,
    OrientedGeodesic,
    a_t,
    act_h3,
    axis,
    normalizer,
    perpendicular_position,
    quasi_distance,
    translation_length,
    wrap_angle,
)

LOG43 = math.log(4.0 / 3.0)


def R(theta: float) -> Isometry:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return Isometry.of(c, -1j * s, -1j * s, c)


@dataclass(frozen=True)
class TripodFrames:
    base: Isometry
    r: float

    def frame(self, k: int) -> Isometry:
        return self.base @ R(2 * math.pi * k / 3) @ a_t(self.r / 4)

    @property
    def frames(self) -> tuple:
        return tuple(self.frame(k) for k in range(3))


def g_r(r: float) -> Isometry:
    return a_t(-r / 4) @ R(2 * math.pi / 3) @ a_t(r / 4)


# ---------------------------------------------------------------------------
# Cartan decomposition in the R / a basis

@dataclass(frozen=True)
class CartanRow:
    r: float
    ell: float
    theta1: float
    theta2: float
    ell_deviation: float  # |ell - r/2 + log 4/3|, evaluated before rounding ell

    @property
    def deviations(self) -> tuple:
        return (self.ell_deviation, abs(self.theta1), abs(self.theta2))


def _mp_angle(U) -> mp.mpf:
    return mp.atan2(U[1, 0], U[0, 0])


def _mp_wrap(x):
    return x - 2 * mp.pi * mp.floor((x + mp.pi) / (2 * mp.pi))


def cartan_R_mp(m) -> tuple:
    """(theta1, ell, theta2) as mpmath numbers for a real 2x2 mpmath matrix m.

    m is g conjugated by D = diag(1, i), which turns R_theta into the real
    rotation by theta / 2 and leaves a_t diagonal.
    """
    U, S, V = mp.svd_r(m)
    if mp.det(U) < 0:
        U[0, 1], U[1, 1] = -U[0, 1], -U[1, 1]
        V[1, 0], V[1, 1] = -V[1, 0], -V[1, 1]
    ell = mp.log(S[0] / S[1])
    return 2 * _mp_angle(U), ell, 2 * _mp_angle(V)  # m = U diag(S) V


def cartan_R(g: Isometry, prefer_positive: bool = True) -> tuple:
    """(theta1, ell, theta2) with g = R_{theta1 + pi} a_ell R_{theta2}.

    Two decompositions differ by R_pi a_ell = a_{-ell} R_pi; the one with the
    requested sign of ell is returned.
    """
    a, b, c, d = g.lift.entries()
    m = [[a, b / 1j], [c * 1j, d]]
    if max(abs(v.imag) for row in m for v in row) > 1e-9 * max(abs(v) for row in m for v in row):
        raise ValueError("element does not preserve the (R, a) real form")
    with mp.workdps(30):
        M = mp.matrix([[mp.mpf(v.real) for v in row] for row in m])
        return _cartan_pick(*cartan_R_mp(M), prefer_positive)


def _cartan_pick(two_alpha, ell, two_beta, prefer_positive: bool) -> tuple:
    # g = R_{2 alpha} a_ell R_{2 beta} = R_{2 alpha + pi} a_{-ell} R_{2 beta - pi}
    if prefer_positive:
        out = (_mp_wrap(two_alpha - mp.pi), ell, _mp_wrap(two_beta))
    else:
        out = (_mp_wrap(two_alpha), -ell, _mp_wrap(two_beta - mp.pi))
    return tuple(float(v) for v in out)


def _g_r_real_mp(r):
    """D g_r D^-1 in mpmath: [[1/2, -s e^{-r/4}], [s e^{r/4}, 1/2]], s = sin(pi/3)."""
    s = mp.sqrt(3) / 2
    q = mp.exp(mp.mpf(r) / 4)
    return mp.matrix([[mp.mpf(1) / 2, -s / q], [s * q, mp.mpf(1) / 2]])


def g_r_cartan_sweep(rs) -> list:
    """Cartan data of g_r with ell odd in r (ell(0) = 0, sign of ell = sign of r)."""
    out = []
    with mp.workdps(60):
        for r in rs:
            a, ell, b = cartan_R_mp(_g_r_real_mp(r))
            t1, _, t2 = _cartan_pick(a, ell, b, r >= 0)
            ell = ell if r >= 0 else -ell
            dev = abs(ell - mp.mpf(r) / 2 + mp.log(mp.mpf(4) / 3))
            out.append(CartanRow(float(r), float(ell), t1, t2, float(dev)))
    return out


def cartan_reconstruct(row: CartanRow) -> Isometry:
    return R(row.theta1 + math.pi) @ a_t(row.ell) @ R(row.theta2)


def loglinear_slope(xs, ys) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(xs, ys, 1)[0])


# ---------------------------------------------------------------------------
# pants from frame triples


@dataclass(frozen=True)
class FrameTriple:
    x: Isometry
    y: Isometry
    A: tuple


def rho_from_triple(A0: Isometry, A1: Isometry, A2: Isometry) -> MarkedPants:
    """(A0 A1^-1, A1 A2^-1, A2 A0^-1); the product telescopes to the identity."""
    return MarkedPants(A0 @ A1.inv(), A1 @ A2.inv(), A2 @ A0.inv())


def exact_tripod_pants(x: Isometry, y: Isometry, r: float) -> tuple:
    """A_k = x_(-k,-r) a_{-r/2} y_(k,r)^-1, making every closeness condition exact."""
    X, Y = TripodFrames(x, -r), TripodFrames(y, r)
    A = tuple(X.frame(-k % 3) @ a_t(-r / 2) @ Y.frame(k).inv() for k in range(3))
    return FrameTriple(x, y, A), rho_from_triple(*A)


def _perturbations(eps: float, seed: int, n: int = 3) -> tuple:
    """n elements at quasi-distance about eps from the identity (fixed by the seed)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        X -= np.trace(X) / 2 * np.eye(2)
        X *= eps / np.linalg.norm(X)
        out.append(Isometry.from_array(expm(X)))
    return tuple(out)


def _mp_triple(x: Isometry, y: Isometry, r: float, eps: float, seed: int) -> tuple:
    """A_k = x_(-k,-r) g1_k a_{-r/2} g2_k y_(k,r)^-1 in high precision.

    g1_k, g2_k are fixed elements eps away from the identity (identity when
    eps = 0), so the closeness conditions hold with error eps.
    """
    X, Y = _mp.mat(x), _mp.mat(y)
    ident = (mp.mpc(1), mp.mpc(0), mp.mpc(0), mp.mpc(1))
    if eps > 0:
        g1, g2 = _perturbations(eps, seed, 6)[:3], _perturbations(eps, seed, 6)[3:]
        g1, g2 = [_mp.mat(g) for g in g1], [_mp.mat(g) for g in g2]
    else:
        g1 = g2 = [ident] * 3
    A = []
    for k in range(3):
        xk = _mp.mul(X, _mp.R(2 * mp.pi * (-k % 3) / 3), _mp.a_t(-r / 4))
        yk = _mp.mul(Y, _mp.R(2 * mp.pi * k / 3), _mp.a_t(r / 4))
        A.append(_mp.mul(xk, g1[k], _mp.a_t(-r / 2), g2[k], _mp.inv(yk)))
    gs = tuple(_mp.mul(A[n - 1], _mp.inv(A[n])) for n in (1, 2, 0))
    return A, gs


def _dps(r: float) -> int:
    return int(30 + r)  # endpoints are ~ e^-r apart


@dataclass
class TripodReport:
    r: float
    sigmas: tuple
    sigma_deviation: float
    futal: bool
    axis_distances: tuple


def tripod_report(x: Isometry, y: Isometry, r: float) -> TripodReport:
    """Half-lengths and axis proximity of the exact tripod pants, in high precision.

    The four points x_(0,-r) p0, A0 y_(0,r) p0, x_(2,-r) p0 and A1 y_(1,r) p0
    should lie near the axis of gamma1.
    """
    with mp.workdps(_dps(r)):
        A, gs = _mp_triple(x, y, r, 0.0, 0)
        sig = _mp.half_lengths(gs)
        target = r - mp.log(mp.mpf(4) / 3)
        dev = max(abs(s - target) for s in sig)
        futal = all(abs(_mp.strip(s - _mp.translation_length(g) / 2)) < 1e-6 for s, g in zip(sig, gs))
        X, Y = _mp.mat(x), _mp.mat(y)
        frame_x = lambda k, t: _mp.mul(X, _mp.R(2 * mp.pi * k / 3), _mp.a_t(t / 4))
        frame_y = lambda k, t: _mp.mul(Y, _mp.R(2 * mp.pi * k / 3), _mp.a_t(t / 4))
        pts = [frame_x(0, -r), _mp.mul(A[0], frame_y(0, r)), frame_x(2, -r), _mp.mul(A[1], frame_y(1, r))]
        ax = _mp.axis(gs[0])
        dists = tuple(float(_mp.axis_distance(ax, m)) for m in pts)
        return TripodReport(r, tuple(complex(s) for s in sig), float(dev), futal, dists)


# ---------------------------------------------------------------------------
# feet from frame pairs


@dataclass(frozen=True)
class VarpiFoot:
    """Foot frame over the axis of gamma.

    ``element`` maps the base frame at p0 to the foot frame; ``position`` is
    the same frame in the canonical coordinates of the axis, read on the
    cuff torus C / (sigma Z + 2 pi i Z).
    """

    gamma: Isometry
    element: Isometry
    position: complex
    torus: CuffTorus


def varpi_geodesic(x: Isometry, y: Isometry) -> OrientedGeodesic:
    return OrientedGeodesic((y @ R(4 * math.pi / 3))(INF), (x @ R(2 * math.pi / 3))(0))


def varpi_foot(gamma: Isometry, x: Isometry, y: Isometry) -> VarpiFoot:
    ax = axis(gamma)
    zeta = perpendicular_position(ax, varpi_geodesic(x, y))
    N = normalizer(ax)
    sigma = translation_length(gamma) / 2
    torus = CuffTorus(sigma)
    return VarpiFoot(gamma, N.inv() @ a_t(zeta), torus.reduce(zeta), torus)


def foot_gap(x: Isometry, y: Isometry, r: float, eps: float = 0.0, seed: int = 0) -> float:
    """Torus distance between the pants foot on gamma1 and varpi_{gamma1}(x, A0 y).

    With eps = 0 the frame triple is exact and the gap vanishes; eps > 0
    perturbs every closeness condition by a fixed element eps away from the
    identity.
    """
    with mp.workdps(_dps(r)):
        A, gs = _mp_triple(x, y, r, eps, seed)
        ax = _mp.axis(gs[0])
        lo, _ = _mp.feet(gs, 0)
        X, Y = _mp.mat(x), _mp.mul(A[0], _mp.mat(y))
        src = _mp.mobius(_mp.mul(Y, _mp.R(4 * mp.pi / 3)), None)
        tgt = _mp.mobius(_mp.mul(X, _mp.R(2 * mp.pi / 3)), mp.mpc(0))
        w = _mp.position(ax, (src, tgt))
        sigma = complex(_mp.translation_length(gs[0]) / 2)
        d = complex(_mp.strip(lo - w))
    return CuffTorus(sigma).distance(d, 0j)


# ---------------------------------------------------------------------------
# Schottky groups and closed geodesics


def _isometric_circle(g: Isometry):
    a, b, c, d = g.lift.entries()
    if abs(c) < 1e-300:
        raise NotSchottky("generator fixes infinity; isometric circle undefined")
    return -d / c, 1.0 / abs(c)


@dataclass
class SchottkyGroup:
    generators: list

    def __post_init__(self):
        self.letters = []
        for k, g in enumerate(self.generators):
            self.letters.append((k, 1, g))
            self.letters.append((k, -1, g.inv()))
        self.circles = {(k, s): _isometric_circle(h) for k, s, h in self.letters}
        keys = list(self.circles)
        for i in range(len(keys)):
            for j in range(i + 1, len(keys)):
                (c1, r1), (c2, r2) = self.circles[keys[i]], self.circles[keys[j]]
                if abs(c1 - c2) <= r1 + r2:
                    raise NotSchottky(f"isometric circles of {keys[i]} and {keys[j]} meet")

    def image_circle(self, k: int, s: int):
        """Isometric circle of the inverse letter: where the letter maps the outside."""
        return self.circles[(k, -s)]

    def outside(self, p: H3Point) -> bool:
        return all(abs(p.z - c) ** 2 + p.t**2 > rad**2 for c, rad in self.circles.values())

    @classmethod
    def from_axes(cls, ends, length: float) -> "SchottkyGroup":
        """Generators of the given real translation length along geodesics (p_k, q_k)."""
        gens = []
        for p, q in ends:
            N = normalizer(OrientedGeodesic(p, q))
            gens.append(N.inv() @ a_t(length) @ N)
        return cls(gens)


def _distance_to_halfspace(p: H3Point, center: complex, rad: float) -> float:
    """Distance from p to the closed half-space inside the hemisphere."""
    q = abs(p.z - center) ** 2 + p.t**2
    if q <= rad**2:
        return 0.0
    return math.asinh((q - rad**2) / (2 * rad * p.t))


def epsilon_prime(eps: float, r: float) -> float:
    """|ell(gamma) - r| bound when quasi_distance(x a_r, gamma x) <= eps.

    The traces differ by at most ||a_r||_F eps <= 2 cosh(r/2) eps, and acosh
    has derivative at most 1 / sqrt(c^2 (1 - eps)^2 - 1) along the segment,
    with c = cosh(r/2).
    """
    c = math.cosh(r / 2)
    q = c * c * (1 - eps) ** 2 - 1
    if q <= 0:
        return math.inf
    return 2 * c * eps / math.sqrt(q)


@dataclass(frozen=True)
class MargulisHit:
    word: tuple
    gamma: Isometry
    quasi_distance: float
    ell: complex
    error: float  # |ell - r| with the imaginary part wrapped


def margulis_search(
    G: SchottkyGroup, x: Isometry, r: float, eps: float, word_bound: int, prune: bool = True
) -> list:
    """Reduced words gamma with quasi_distance(x a_r, gamma x) <= eps.

    Pruning: every extension of a reduced word w = w' l sends o = x p0 into
    w'(D_l), the half-space bounded by the isometric hemisphere of l^-1.  A
    hit needs d(gamma o, x a_r p0) <= acosh((sqrt 2 + eps)^2 / 2), so w is
    discarded when that half-space is farther away.  The bound needs o outside
    every hemisphere; otherwise the search runs without pruning.
    """
    target = x @ a_t(r)
    q = act_h3(target, P0)
    o = act_h3(x, P0)
    radius = math.acosh((math.sqrt(2) + eps) ** 2 / 2)
    prune = prune and G.outside(o)
    bound = epsilon_prime(eps, r)
    hits = []

    def visit(word, W):
        if word:
            qd = quasi_distance(target, W @ x)
            if qd <= eps:
                ell = translation_length(W)
                err = abs(complex(ell.real - r, wrap_angle(ell.imag)))
                if err >= bound:
                    raise AssertionError(f"hit {word} violates the length bound: {err} >= {bound}")
                hits.append(MargulisHit(tuple(word), W, qd, ell, err))
        if len(word) >= word_bound:
            return
        for k, s, h in G.letters:
            if word and word[-1] == (k, -s):
                continue
            if prune:
                c, rad = G.image_circle(k, s)
                if _distance_to_halfspace(act_h3(W.inv(), q), c, rad) > radius:
                    continue
            visit(word + [(k, s)], W @ h)

    visit([], IDENTITY)
    return hits


# ---------------------------------------------------------------------------
# Harish-Chandra function


def xi_closed_form(r: float) -> float:
    if r == 0:
        return 1 / math.pi
    return r / (math.pi * math.sinh(r))


def xi_harish_chandra(r: float) -> float:
    """(1/pi) int_0^{pi/2} sin(2 th) / (e^-r cos^2 th + e^r sin^2 th) d th by adaptive quadrature.

    The integrand concentrates in a layer of width ~ e^-r at th = 0, so the
    interval is split geometrically there.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    em, ep = math.exp(-r), math.exp(r)

    def f(th):
        s, c = math.sin(th), math.cos(th)
        return math.sin(2 * th) / (em * c * c + ep * s * s)

    edges = [0.0]
    w = math.exp(-r)
    while w < math.pi / 2:
        edges.append(w)
        w *= 4
    edges.append(math.pi / 2)
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        val, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-12, limit=200)
        total += val
    return total / math.pi


__all__ = [
    "CartanRow",
    "FrameTriple",
    "LOG43",
    "MargulisHit",
    "R",
    "SchottkyGroup",
    "TripodFrames",
    "TripodReport",
    "VarpiFoot",
    "cartan_R",
    "cartan_reconstruct",
    "epsilon_prime",
    "exact_tripod_pants",
    "foot_gap",
    "g_r",
    "g_r_cartan_sweep",
    "loglinear_slope",
    "margulis_search",
    "rho_from_triple",
    "tripod_report",
    "varpi_foot",
    "varpi_geodesic",
    "xi_closed_form",
    "xi_harish_chandra",
]
