"""Counting cuff crossings of geodesic segments on Fuchsian surfaces.

Every pants of a real representation is the double of a right-angled
hexagon bounded alternately by cuff axes and seams (common perpendiculars of
two cuff axes).  The universal cover is tiled by images of these hexagons, so
a segment can be followed tile by tile; each exit through a cuff side is one
transversal crossing of a distinct cuff lift, since a geodesic meets a line
at most once.  Work happens in the hyperboloid model, where lines are unit
spacelike normals and reflections are linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from surfacekit.errors import DepthInsufficient, NotFuchsian
from surfacekit.psl2c import Isometry, axis, is_inf

ETA = np.diag([-1.0, 1.0, 1.0])


def mink(x, y) -> float:
    return float(-x[0] * y[0] + x[1] * y[1] + x[2] * y[2])


def _cross(x, y):
    return ETA @ np.cross(x, y)  # Minkowski-orthogonal to x and y


def _unit(v):
    q = mink(v, v)
    return v / math.sqrt(abs(q))


def _timelike(v):
    v = _unit(v)
    return v if v[0] > 0 else -v


def point(z: complex):
    x, y = z.real, z.imag
    r = x * x + y * y
    return np.array([(r + 1) / (2 * y), (r - 1) / (2 * y), x / y])


def to_half_plane(X) -> complex:
    X = _timelike(X)
    return complex(X[2], 1.0) / (X[0] - X[1])


def light(p):
    if is_inf(p):
        return np.array([1.0, 1.0, 0.0])
    a = float(np.real(p))
    return np.array([a * a + 1, a * a - 1, 2 * a])


def line_normal(p, q):
    return _unit(_cross(light(p), light(q)))


def reflection(n):
    return np.eye(3) - 2.0 * np.outer(n, ETA @ n)


_SAMPLES = (1j, 1 + 2j, -0.5 + 0.7j)


def so21(g: Isometry):
    """Image of a real Mobius map in SO+(2,1)."""
    a, b, c, d = g.lift.entries()
    imag = max(abs(v.imag) for v in (a, b, c, d))
    scale = max(abs(v) for v in (a, b, c, d))
    if imag > 1e-8 * scale:
        raise NotFuchsian("matrix is not real")
    src = np.column_stack([point(z) for z in _SAMPLES])
    dst = np.column_stack([point(g(z)) for z in _SAMPLES])
    return dst @ np.linalg.inv(src)


def distance(X, Y) -> float:
    return math.acosh(max(1.0, -mink(X, Y)))


def line_distance(n, m) -> float:
    return math.acosh(max(1.0, abs(mink(n, m))))


@dataclass(frozen=True)
class Hexagon:
    """Sides in cyclic order cuff1, seam12, cuff2, seam23, cuff3, seam31.

    Normals point away from the interior, so x is inside iff every
    <x, n> < 0.
    """

    normals: tuple
    vertices: tuple
    center: np.ndarray

    @staticmethod
    def from_pants(p) -> "Hexagon":
        cuff = [line_normal(a.source, a.target) for a in (axis(g) for g in p.as_tuple())]
        sides = []
        for k in range(3):
            sides.append(cuff[k])
            sides.append(_unit(_cross(cuff[k], cuff[(k + 1) % 3])))
        verts = [_timelike(_cross(sides[k], sides[(k + 1) % 6])) for k in range(6)]
        center = _timelike(sum(verts))
        oriented = tuple(n if mink(center, n) < 0 else -n for n in sides)
        for n in oriented:
            if any(mink(v, n) > 1e-7 * (1 + abs(v[0])) for v in verts):
                raise NotFuchsian("cuff axes do not bound a right-angled hexagon")
        return Hexagon(oriented, tuple(verts), center)

    def moved(self, M) -> "Hexagon":
        # normals are covariant under O(2,1); orientation is preserved
        return Hexagon(tuple(M @ n for n in self.normals), tuple(M @ v for v in self.vertices), M @ self.center)


@dataclass
class Crossing:
    edge: int
    arclength: float


@dataclass
class Witness:
    distance: float  # d(C_i, C_{i+1})
    along: float  # d(w_i^+, z_{i+1})
    height: float  # d(z_{i+1}, C_i)

    @property
    def lhs(self) -> float:
        return self.distance * math.exp(self.along)

    @property
    def rhs(self) -> float:
        return math.exp(self.height)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-9)


@dataclass
class CrossingReport:
    count: int
    crossings: list
    witnesses: list
    tiles_visited: int

    @property
    def divergence_ok(self) -> bool:
        return all(w.holds for w in self.witnesses)


def divergence_witness(n_i, n_next, z_next) -> Witness:
    D = line_distance(n_i, n_next)
    m = _unit(_cross(n_i, n_next))
    w = _timelike(_cross(n_next, m))
    x = distance(w, z_next)
    h = math.asinh(abs(mink(z_next, n_i)))
    return Witness(D, x, h)


class Walker:
    """Follows a geodesic through the hexagon tiling.

    The state is kept in the reference frame of the current tile's hexagon,
    so coordinates stay bounded however far the segment travels; `parity`
    records whether the tile is a mirror image of its reference hexagon.
    """

    def __init__(self, rep, max_tiles: int = 100000):
        self.rep = rep
        self.max_tiles = max_tiles
        self.ref = [Hexagon.from_pants(p) for p in rep.local]
        self.slot = rep.graph.slot_edge()
        self.glue = []
        for k in range(len(rep.graph.edges)):
            G = so21(rep.transitions[k])  # v-frame -> u-frame
            self.glue.append({+1: G, -1: np.linalg.inv(G)})
        self.tiles = 0

    @staticmethod
    def _exit(hexa: Hexagon, X, V, skip):
        best, side = math.inf, None
        for k, n in enumerate(hexa.normals):
            if k == skip:
                continue
            al, be = mink(X, n), mink(V, n)
            if be <= 0 or be <= -al:
                continue
            s = math.atanh(min(1.0, max(0.0, -al / be)))
            if s < best:
                best, side = s, k
        return best, side

    def _count_tile(self):
        self.tiles += 1
        if self.tiles > self.max_tiles:
            raise DepthInsufficient(f"tile budget {self.max_tiles} exhausted")

    def walk(self, v: int, X, V, length: float, record: bool = True, carry=(), parity: int = 1):
        """Follow the ray; `carry` vectors are mapped along into the final frame.

        Returns (crossings, witnesses, tile, carry, parity).
        """
        carry = list(carry)
        skip, travelled = None, 0.0
        prev, crossings, witnesses = None, [], []
        while True:
            hexa = self.ref[v]
            s, side = self._exit(hexa, X, V, skip)
            if side is None or travelled + s >= length:
                return crossings, witnesses, v, carry, parity
            X, V = math.cosh(s) * X + math.sinh(s) * V, math.sinh(s) * X + math.cosh(s) * V
            X = _timelike(X)
            V = _unit(V + mink(V, X) * X)
            travelled += s
            n = hexa.normals[side]
            self._count_tile()
            if side % 2 == 1:
                S = reflection(n)
                parity = -parity
            else:
                a = side // 2
                k, direction = self.slot[(v, a)]
                if record:
                    crossings.append(Crossing(k, travelled))
                    if prev is not None:
                        witnesses.append(divergence_witness(prev, n, X))
                    prev = n
                S = reflection(hexa.normals[2 * a + 1]) if parity < 0 else np.eye(3)
                S = self.glue[k][-direction] @ S
                ed = self.rep.graph.edges[k]
                v, b = (ed.v, ed.j) if direction > 0 else (ed.u, ed.i)
                parity = 1
                x = S @ X
                lo, hi = self.ref[v].normals[(2 * b - 1) % 6], self.ref[v].normals[2 * b + 1]
                for _ in range(100000):
                    if mink(x, hi) > 0:
                        F = reflection(hi)
                    elif mink(x, lo) > 0:
                        F = reflection(lo)
                    else:
                        break
                    S, x, parity = F @ S, F @ x, -parity
                else:
                    raise DepthInsufficient("floor search along a cuff did not converge")
                side = 2 * b
            X, V = S @ X, S @ V
            if prev is not None:
                prev = S @ prev
            carry = [S @ c for c in carry]
            skip = side

    def locate(self, C, X, V, d):
        """Frame of the tile containing X, found by walking from C in tile 0."""
        _, _, v, (X, V), parity = self.walk(0, C, tangent(C, X), d, record=False, carry=(X, V))
        return v, X, V, parity


def tangent(X, Y):
    """Unit tangent at X toward Y."""
    return _unit(Y + mink(Y, X) * X)


def tangent_at(z: complex, angle: float):
    """Unit tangent at z pointing at the given Euclidean angle in the half plane."""
    x, y = z.real, z.imag
    dx = np.array([x / y, x / y, 1 / y])
    dy = np.array([(y * y - x * x - 1) / (2 * y * y), (y * y - x * x + 1) / (2 * y * y), -x / (y * y)])
    return _unit(math.cos(angle) * dx + math.sin(angle) * dy)


def crossing_count(rep, start: complex, direction: float, length: float, depth: int = 100000) -> CrossingReport:
    """Cuff lifts crossed by the segment from `start` (upper half plane) of given length.

    `direction` is the Euclidean angle of the initial tangent at `start`;
    `depth` caps the number of hexagonal tiles visited.  The segment is
    located by walking (without counting) from the root hexagon's center.
    """
    walker = Walker(rep, depth)
    if length <= 0:
        return CrossingReport(0, [], [], 0)
    z = complex(start)
    X, V = point(z), tangent_at(z, direction)
    C = walker.ref[0].center
    d = distance(C, X)
    v, parity = 0, 1
    if d > 1e-12:
        v, X, V, parity = walker.locate(C, X, V, d)
    walker.tiles = 0
    crossings, wit, _, _, _ = walker.walk(v, X, V, length, parity=parity)
    return CrossingReport(len(crossings), crossings, wit, walker.tiles)


def root_hexagon_point(rep, weights) -> complex:
    """A point inside the root hexagon, from positive vertex weights."""
    h = Hexagon.from_pants(rep.local[0])
    X = _timelike(sum(w * v for w, v in zip(weights, h.vertices)))
    return to_half_plane(X)
