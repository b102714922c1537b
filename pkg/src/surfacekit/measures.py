"""Finite atomic measures, couplings, and the labeling/matching pipeline.

Closeness of atomic measures is decided as a transport problem: mu is
delta-close to nu exactly when a coupling moves every unit of mu-mass at
most delta (Strassen).  Feasibility is a max-flow question, solved in exact
integer arithmetic when the masses are rational.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Protocol, Sequence

import networkx as nx
from networkx.algorithms.flow import preflow_push
import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog
from scipy.sparse.csgraph import maximum_flow

from surfacekit.assembly import AdmissibleInvolution, Labeling, PantsClass, labeling_from_classes
from surfacekit.config import tol
from surfacekit.errors import InfeasibleSystem, MassMismatch, MatchInfeasible, NotSymmetric, SizeMismatch
from surfacekit.pants import TWO_PI_I, CuffTorus

SHIFT = 1.0 + 1j * math.pi
_INT32 = 2**31 - 1


# ---------------------------------------------------------------------------
# metric spaces


class MetricSpace(Protocol):
    def distance(self, p, q) -> float: ...


def _reduced_basis(a: complex, b: complex) -> tuple[complex, complex]:
    # Lagrange-Gauss reduction
    if abs(a) > abs(b):
        a, b = b, a
    while True:
        mu = round(((b * a.conjugate()).real) / abs(a) ** 2)
        b = b - mu * a
        if abs(b) >= abs(a):
            return a, b
        a, b = b, a


def torus_pairwise(torus: CuffTorus, P, Q) -> np.ndarray:
    """Matrix of flat-torus distances between two arrays of complex points."""
    P = np.asarray(P, dtype=complex)[:, None]
    Q = np.asarray(Q, dtype=complex)[None, :]
    a, b = _reduced_basis(torus.sigma, TWO_PI_I)
    d = P - Q
    M = np.array([[a.real, b.real], [a.imag, b.imag]])
    x, y = np.linalg.solve(M, np.stack([d.real.ravel(), d.imag.ravel()]))
    d = d - (np.round(x).reshape(d.shape) * a + np.round(y).reshape(d.shape) * b)
    best = np.abs(d)
    for i, j in itertools.product((-1, 0, 1), repeat=2):
        if i or j:
            np.minimum(best, np.abs(d + i * a + j * b), out=best)
    return best


@dataclass(frozen=True)
class TorusUnion:
    """Disjoint union of cuff tori; points are (key, complex) pairs."""

    tori: dict

    def distance(self, p, q) -> float:
        if p[0] != q[0]:
            return math.inf
        return self.tori[p[0]].distance(p[1], q[1])

    def pairwise(self, P, Q) -> np.ndarray:
        out = np.full((len(P), len(Q)), np.inf)
        keys = {p[0] for p in P} & {q[0] for q in Q}
        for k in keys:
            ip = [i for i, p in enumerate(P) if p[0] == k]
            iq = [j for j, q in enumerate(Q) if q[0] == k]
            D = torus_pairwise(self.tori[k], [P[i][1] for i in ip], [Q[j][1] for j in iq])
            out[np.ix_(ip, iq)] = D
        return out


@dataclass(frozen=True)
class FunctionSpace:
    dist: Callable

    def distance(self, p, q) -> float:
        return self.dist(p, q)


def pairwise(space, P, Q) -> np.ndarray:
    if hasattr(space, "pairwise"):
        return space.pairwise(P, Q)
    if isinstance(space, CuffTorus):
        return torus_pairwise(space, P, Q)
    return np.array([[space.distance(p, q) for q in Q] for p in P], dtype=float).reshape(len(P), len(Q))


# ---------------------------------------------------------------------------
# measures


def _exact(m) -> bool:
    return isinstance(m, (int, Fraction)) and not isinstance(m, bool)


@dataclass
class AtomicMeasure:
    points: list
    masses: list

    def __post_init__(self):
        if len(self.points) != len(self.masses):
            raise ValueError("one mass per atom")
        for m in self.masses:
            if not m > 0:
                raise ValueError("atom masses must be positive")

    @classmethod
    def from_atoms(cls, atoms, space=None) -> "AtomicMeasure":
        """Merge atoms whose points coincide (within the dedup tolerance when a space is given)."""
        pts, ms = [], []
        for p, m in atoms:
            for k, q in enumerate(pts):
                same = (space.distance(p, q) <= tol().dedup) if space is not None else p == q
                if same:
                    ms[k] = ms[k] + m
                    break
            else:
                pts.append(p)
                ms.append(m)
        return cls(pts, ms)

    @property
    def total(self):
        return sum(self.masses, 0)

    @property
    def exact(self) -> bool:
        return all(_exact(m) for m in self.masses)

    def __len__(self):
        return len(self.points)

    def pushforward(self, f) -> "AtomicMeasure":
        return AtomicMeasure([f(p) for p in self.points], list(self.masses))

    def scaled(self, c) -> "AtomicMeasure":
        return AtomicMeasure(list(self.points), [m * c for m in self.masses])


@dataclass
class Coupling:
    ok: bool
    value: object
    total: object
    witness: tuple = ()  # source atoms A with mu(A) > nu(V_delta(A)) when not ok
    plan: dict = field(default_factory=dict)


def _lcm_den(ms) -> int:
    out = 1
    for m in ms:
        out = math.lcm(out, Fraction(m).denominator)
    return out


def _flow_scipy(sup, dem, pairs):
    n, m = len(sup), len(dem)
    s, t = 0, n + m + 1
    big = min(_INT32, sum(sup) + 1)
    rows = [s] * n + [1 + i for i, _ in pairs] + [1 + n + j for j in range(m)]
    cols = [1 + i for i in range(n)] + [1 + n + j for _, j in pairs] + [t] * m
    caps = list(sup) + [big] * len(pairs) + list(dem)
    keep = [k for k, c in enumerate(caps) if c > 0]
    A = sp.csr_matrix(
        (np.array([caps[k] for k in keep], dtype=np.int32), ([rows[k] for k in keep], [cols[k] for k in keep])),
        shape=(t + 1, t + 1),
    )
    res = maximum_flow(A, s, t)
    F = res.flow.tocsr()
    plan = {}
    Fc = F.tocoo()
    for a, b, v in zip(Fc.row, Fc.col, Fc.data):
        if v > 0 and 1 <= a <= n and n < b <= n + m:
            plan[(int(a) - 1, int(b) - n - 1)] = int(v)
    if res.flow_value == sum(sup):
        return int(res.flow_value), (), plan
    # the flow matrix is antisymmetric, so A - F already holds the reverse arcs
    resid = (A - F).tocsr()
    seen = {s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        row = resid.getrow(x)
        for y, c in zip(row.indices, row.data):
            if c > 0 and y not in seen:
                seen.add(y)
                queue.append(y)
    witness = tuple(i for i in range(n) if 1 + i in seen)
    return int(res.flow_value), witness, plan


def _flow_nx(sup, dem, pairs):
    G = nx.DiGraph()
    n = len(sup)
    G.add_node("s")
    G.add_node("t")
    for i, c in enumerate(sup):
        G.add_edge("s", ("a", i), capacity=c)
    for j, c in enumerate(dem):
        G.add_edge(("b", j), "t", capacity=c)
    for i, j in pairs:
        G.add_edge(("a", i), ("b", j))  # no capacity attribute: unbounded
    # one preflow-push run; the min cut is read off its residual network
    res = preflow_push(G, "s", "t")
    value = res.graph["flow_value"]
    seen, queue = {"s"}, deque(["s"])
    while queue:
        u = queue.popleft()
        for w, attr in res[u].items():
            if w not in seen and attr["capacity"] - attr["flow"] > 0:
                seen.add(w)
                queue.append(w)
    witness = tuple(i for i in range(n) if ("a", i) in seen)
    plan = {(i, j): res[("a", i)][("b", j)]["flow"] for i, j in pairs if res[("a", i)][("b", j)]["flow"] > 0}
    return value, witness, plan


def transport(sup: Sequence, dem: Sequence, pairs: Sequence) -> Coupling:
    """Can all of `sup` be routed to `dem` along `pairs` (source, target)?"""
    total_s = sum(sup, 0)
    exact = all(_exact(x) for x in itertools.chain(sup, dem))
    if exact:
        L = _lcm_den(itertools.chain(sup, dem))
        isup = [int(Fraction(x) * L) for x in sup]
        idem = [int(Fraction(x) * L) for x in dem]
        if max(sum(isup), sum(idem)) < _INT32:
            value, witness, plan = _flow_scipy(isup, idem, pairs)
            ok = value == sum(isup)
            return Coupling(ok, Fraction(value, L), Fraction(total_s), () if ok else witness,
                            {k: Fraction(v, L) for k, v in plan.items()})
        value, witness, plan = _flow_nx([Fraction(x) for x in sup], [Fraction(x) for x in dem], pairs)
        ok = value == Fraction(total_s)
        return Coupling(ok, value, Fraction(total_s), () if ok else witness, plan)
    value, witness, plan = _flow_nx([float(x) for x in sup], [float(x) for x in dem], pairs)
    ok = value >= float(total_s) - tol().mass * max(1.0, float(total_s))
    return Coupling(ok, value, float(total_s), () if ok else witness, plan)


def _within(D: np.ndarray, delta: float) -> list:
    # non-strict boundary, padded by rounding in the distance evaluation
    I, J = np.nonzero(D <= delta * (1 + 1e-12) + 1e-12)
    return list(zip(I.tolist(), J.tolist()))


def masses_equal(mu: AtomicMeasure, nu: AtomicMeasure) -> bool:
    a, b = mu.total, nu.total
    if _exact(a) and _exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol().mass * max(1.0, abs(float(a)))


def coupling(mu: AtomicMeasure, nu: AtomicMeasure, delta: float, space) -> Coupling:
    if not masses_equal(mu, nu):
        raise MassMismatch(f"total masses differ: {mu.total} vs {nu.total}")
    D = pairwise(space, mu.points, nu.points)
    return transport(mu.masses, nu.masses, _within(D, delta))


def delta_close(mu: AtomicMeasure, nu: AtomicMeasure, delta: float, space, strict_mass: bool = False) -> bool:
    """mu(A) <= nu(V_delta(A)) for every A, with mu(X) = nu(X).

    Unequal total masses give False, or MassMismatch when strict_mass is set.
    """
    try:
        return coupling(mu, nu, delta, space).ok
    except MassMismatch:
        if strict_mass:
            raise
        return False


def delta_close_bruteforce(mu: AtomicMeasure, nu: AtomicMeasure, delta: float, space) -> bool:
    """Check the defining inequality on all 2^n subsets of the support of mu."""
    if not masses_equal(mu, nu):
        return False
    D = pairwise(space, mu.points, nu.points)
    near = D <= delta * (1 + 1e-12) + 1e-12
    exact = mu.exact and nu.exact
    slack = 0 if exact else tol().mass * max(1.0, float(mu.total))
    n = len(mu)
    for r in range(1, n + 1):
        for A in itertools.combinations(range(n), r):
            nbhd = np.any(near[list(A)], axis=0)
            lhs = sum((mu.masses[i] for i in A), 0)
            rhs = sum((nu.masses[j] for j in np.nonzero(nbhd)[0]), 0)
            if lhs > rhs + slack:
                return False
    return True


# ---------------------------------------------------------------------------
# Hall matching


@dataclass
class MatchOutcome:
    ok: bool
    bijection: dict
    witness: tuple = ()  # Hall violator C on the left
    neighbors: tuple = ()  # its admissible partners, fewer than |C|


def hall_match(A: Sequence, B: Sequence, fA: Callable, gB: Callable, delta: float, space) -> MatchOutcome:
    """Bijection h: A -> B with d(g(h(a)), f(a)) <= delta, or a Hall violator."""
    if len(A) != len(B):
        raise SizeMismatch(f"|A| = {len(A)} but |B| = {len(B)}")
    n = len(A)
    if n == 0:
        return MatchOutcome(True, {})
    D = pairwise(space, [fA(a) for a in A], [gB(b) for b in B])
    G = nx.Graph()
    left = [("a", i) for i in range(n)]
    G.add_nodes_from(left, bipartite=0)
    G.add_nodes_from((("b", j) for j in range(n)), bipartite=1)
    G.add_edges_from((("a", i), ("b", j)) for i, j in _within(D, delta))
    M = nx.bipartite.hopcroft_karp_matching(G, top_nodes=left)
    if all(u in M for u in left):
        return MatchOutcome(True, {A[i]: B[M[("a", i)][1]] for i in range(n)})
    # alternating BFS from an unmatched left vertex (Konig)
    start = next(u for u in left if u not in M)
    C, N = {start}, set()
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in G[u]:
            if w not in N:
                N.add(w)
                mate = M.get(w)
                if mate is not None and mate not in C:
                    C.add(mate)
                    queue.append(mate)
    return MatchOutcome(
        False,
        {},
        tuple(A[i] for _, i in sorted(C)),
        tuple(B[j] for _, j in sorted(N)),
    )


# ---------------------------------------------------------------------------
# equidistribution


class _Indeterminate:
    def __repr__(self):
        return "Indeterminate"

    def __bool__(self):
        raise TypeError("equidistribution verdict is indeterminate")


Indeterminate = _Indeterminate()


def lebesgue_grid(torus: CuffTorus, cell: float) -> tuple[list, float]:
    """Cell centers of a lattice-aligned grid with diameter <= cell, and the
    largest distance from a cell point to its center."""
    a, b = torus.sigma, TWO_PI_I
    n = m = 1
    while True:
        r = max(abs(a / n + b / m), abs(a / n - b / m)) / 2
        if 2 * r <= cell:
            break
        if abs(a) / n >= abs(b) / m:
            n += 1
        else:
            m += 1
    pts = [(i + 0.5) * a / n + (j + 0.5) * b / m for i in range(n) for j in range(m)]
    return pts, r


def _torus_verdict(torus: CuffTorus, pts, masses, delta: float):
    total = sum(masses, 0)
    grid, r = lebesgue_grid(torus, delta / 8)
    N = len(grid)
    exact = all(_exact(x) for x in masses)
    cell_mass = Fraction(total) / N if exact else float(total) / N
    D = torus_pairwise(torus, pts, grid)
    dem = [cell_mass] * N
    if delta - r > 0 and transport(masses, dem, _within(D, delta - r)).ok:
        return True
    if not transport(masses, dem, _within(D, delta + r)).ok:
        return False
    return Indeterminate


def equidistributed(nu: AtomicMeasure, delta: float, space: TorusUnion):
    """True / False / Indeterminate: is nu delta-close to its Lebesgue average?

    The average is replaced by a grid measure within r of it (r the cell
    radius); closeness at delta - r certifies True, failure at delta + r
    certifies False.
    """
    groups = defaultdict(lambda: ([], []))
    for p, m in zip(nu.points, nu.masses):
        groups[p[0]][0].append(p[1])
        groups[p[0]][1].append(m)
    verdict = True
    for key, (pts, ms) in groups.items():
        v = _torus_verdict(space.tori[key], pts, ms, delta)
        if v is False:
            return False
        if v is Indeterminate:
            verdict = Indeterminate
    return verdict


# ---------------------------------------------------------------------------
# symmetric pants measures


def orbit(pc: PantsClass) -> list:
    out = []
    p = pc
    for _ in range(3):
        out.append(p)
        out.append(p.R())
        p = p.rot()
    return out


def symmetrize(atoms: Sequence) -> list:
    """Average masses over <R, rot>-orbits; returns (orbit representative, mass) pairs."""
    mass = defaultdict(lambda: 0)
    for pc, m in atoms:
        mass[pc] = mass[pc] + m
    reps, seen = [], set()
    for pc in mass:
        if pc in seen:
            continue
        orb = orbit(pc)
        if len(set(orb)) != 6:
            raise NotSymmetric("pants with a rotational self-symmetry are not supported")
        seen.update(orb)
        vals = [mass.get(q, 0) for q in orb]
        avg = sum(vals, 0) / 6 if not all(_exact(v) for v in vals) else Fraction(sum(vals, 0), 6)
        reps.append((pc, avg))
    return reps


def is_symmetric(atoms: Sequence) -> bool:
    mass = defaultdict(lambda: 0)
    for pc, m in atoms:
        mass[pc] = mass[pc] + m
    for pc, m in mass.items():
        for q in (pc.R(), pc.rot()):
            other = mass.get(q, 0)
            if _exact(m) and _exact(other):
                if m != other:
                    return False
            elif abs(float(m) - float(other)) > tol().mass * max(1.0, abs(float(m))):
                return False
    return True


def expand(reps: Sequence) -> list:
    return [(q, m) for pc, m in reps for q in orbit(pc)]


def geodesic_sigmas(atoms: Sequence) -> dict:
    out = {}
    for pc, _ in atoms:
        for (g, _), s in zip(pc.cuffs, pc.sigmas):
            if g in out and abs(out[g] - s) > tol().roundtrip:
                raise NotSymmetric(f"geodesic {g!r} carries two half-lengths")
            out.setdefault(g, s)
    return out


def foot_measures(atoms: Sequence, shift: complex = SHIFT):
    """Per geodesic g: (shifted feet of pants marked +g, feet of pants marked -g)."""
    plus, minus = defaultdict(list), defaultdict(list)
    for pc, m in atoms:
        g, o = pc.marked
        if o > 0:
            plus[g].append((pc.feet[0] + shift, m))
        else:
            minus[g].append((pc.feet[0], m))
    return plus, minus


def shift_close(atoms: Sequence, delta: float, shift: complex = SHIFT) -> bool:
    sig = geodesic_sigmas(atoms)
    plus, minus = foot_measures(atoms, shift)
    for g in set(plus) | set(minus):
        a = AtomicMeasure([p for p, _ in plus[g]], [m for _, m in plus[g]]) if plus[g] else AtomicMeasure([], [])
        b = AtomicMeasure([p for p, _ in minus[g]], [m for _, m in minus[g]]) if minus[g] else AtomicMeasure([], [])
        if not delta_close(a, b, delta, CuffTorus(sig[g])):
            return False
    return True


def rationalize(atoms: Sequence, delta: float, shift: complex = SHIFT, max_denominator: int = 10**6) -> list:
    """Integer masses on the same atoms keeping R/rot symmetry and shift-closeness.

    Returns (PantsClass, int) pairs.  The nearest feasible masses (in L1 over
    orbit variables) come from a linear program; their rational approximations
    are re-verified exactly before scaling to integers.
    """
    reps = symmetrize(atoms)
    if all(_exact(m) for _, m in reps) and shift_close(expand(reps), delta, shift):
        L = _lcm_den(m for _, m in reps)
        return [(q, int(m * L)) for q, m in expand(reps)]
    x0 = np.array([float(m) for _, m in reps])
    idx = {pc: k for k, (pc, _) in enumerate(reps)}
    owner = {}
    for pc, _ in reps:
        for q in orbit(pc):
            owner[q] = idx[pc]
    full = [(q, 1.0) for q, _ in expand(reps)]
    sig = geodesic_sigmas(full)
    plus, minus = defaultdict(list), defaultdict(list)
    for q, _ in full:
        g, o = q.marked
        if o > 0:
            plus[g].append((q.feet[0] + shift, owner[q]))
        else:
            minus[g].append((q.feet[0], owner[q]))
    # variables: x (n), u (n) for |x - x0|, flows
    n = len(reps)
    flows = []
    for g in plus:
        D = torus_pairwise(CuffTorus(sig[g]), [p for p, _ in plus[g]], [p for p, _ in minus[g]])
        flows.extend((g, i, j) for i, j in _within(D, delta))
    nv = 2 * n + len(flows)
    rowid, b = {}, []
    for g in plus:
        for side, lst in (("+", plus[g]), ("-", minus[g])):
            for k in range(len(lst)):
                rowid[(g, side, k)] = len(rowid)
                b.append(0.0)
    rows, cols, vals = [], [], []
    for f, (g, i, j) in enumerate(flows):
        for key in ((g, "+", i), (g, "-", j)):
            rows.append(rowid[key])
            cols.append(2 * n + f)
            vals.append(1.0)
    for g in plus:
        for side, lst in (("+", plus[g]), ("-", minus[g])):
            for k, (_, o) in enumerate(lst):
                rows.append(rowid[(g, side, k)])
                cols.append(o)
                vals.append(-1.0)
    r = len(rowid)
    A_eq = sp.csr_matrix((vals, (rows, cols)), shape=(r, nv))
    # |x - x0| <= u
    ub_rows, ub_cols, ub_vals, b_ub = [], [], [], []
    for k in range(n):
        ub_rows += [2 * k, 2 * k, 2 * k + 1, 2 * k + 1]
        ub_cols += [k, n + k, k, n + k]
        ub_vals += [1.0, -1.0, -1.0, -1.0]
        b_ub += [x0[k], -x0[k]]
    A_ub = sp.csr_matrix((ub_vals, (ub_rows, ub_cols)), shape=(2 * n, nv))
    floor = 1e-3 * float(x0.min())
    bounds = [(floor, None)] * n + [(0, None)] * (n + len(flows))
    c = np.concatenate([np.zeros(n), np.ones(n), np.zeros(len(flows))])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b, bounds=bounds, method="highs")
    if res.status != 0:
        raise InfeasibleSystem(f"no symmetric masses satisfy the closeness constraint ({res.message})")
    xs = res.x[:n]
    D = 10
    while D <= max_denominator:
        q = [Fraction(float(x)).limit_denominator(D) for x in xs]
        if all(v > 0 for v in q):
            cand = [(pc, v) for (pc, _), v in zip(reps, q)]
            if shift_close(expand(cand), delta, shift):
                L = _lcm_den(q)
                return [(pc2, int(m * L)) for pc2, m in expand(cand)]
        D *= 10
    raise InfeasibleSystem("no rational masses within the denominator budget pass the exact check")


# ---------------------------------------------------------------------------
# labeling and involution


def build_labeling(atoms: Sequence) -> Labeling:
    """Index scheme from an integer symmetric measure given as (PantsClass, mass) pairs."""
    for _, m in atoms:
        if not (isinstance(m, int) or (isinstance(m, Fraction) and m.denominator == 1)):
            raise NotSymmetric("build_labeling needs integer masses")
    if not is_symmetric(atoms):
        raise NotSymmetric("measure is not invariant under R and rot")
    reps = symmetrize(atoms)
    return labeling_from_classes([pc for pc, _ in reps], [int(m) for _, m in reps])


def construct_involution(lab: Labeling, delta: float, shift: complex = SHIFT) -> AdmissibleInvolution:
    """Pair E(g+) with E(g-) so that shift + p(e) lies within delta of p(tau e)."""
    plus, minus = defaultdict(list), defaultdict(list)
    for e in lab.elements:
        g, o = lab.label[e].marked
        (plus if o > 0 else minus)[g].append(e)
    tau = {}
    for g in sorted(set(plus) | set(minus)):
        A, B = plus[g], minus[g]
        if len(A) != len(B):
            raise MatchInfeasible(f"geodesic {g!r}: {len(A)} vs {len(B)} marked pants", key=g)
        if not A:
            continue
        torus = CuffTorus(lab.label[A[0]].sigmas[0])
        out = hall_match(
            A, B, lambda e: lab.label[e].feet[0] + shift, lambda e: lab.label[e].feet[0], delta, torus
        )
        if not out.ok:
            raise MatchInfeasible(
                f"geodesic {g!r}: Hall condition fails", out.witness, out.neighbors, key=g
            )
        for a, b in out.bijection.items():
            tau[a], tau[b] = b, a
    return AdmissibleInvolution(tau)


# ---------------------------------------------------------------------------
# synthetic generators


def jittered_grid(torus: CuffTorus, n: int, m: int, jitter: float, rng: random.Random):
    """n*m points, one per grid cell, moved at most `jitter` from the center.

    Returns (points, delta) where delta bounds the distance of the counting
    measure (scaled by area) to Lebesgue: cell radius plus jitter.
    """
    a, b = torus.sigma, TWO_PI_I
    r = max(abs(a / n + b / m), abs(a / n - b / m)) / 2
    pts = []
    for i in range(n):
        for j in range(m):
            c = (i + 0.5) * a / n + (j + 0.5) * b / m
            ang, rad = rng.uniform(0, 2 * math.pi), jitter * math.sqrt(rng.random())
            pts.append(c + rad * complex(math.cos(ang), math.sin(ang)))
    return pts, r + jitter


def synthetic_pants_measure(
    R: float, eps: float, geodesics: int, grid: tuple, jitter: float, rng: random.Random, multiplicity: int = 1
):
    """Integer symmetric measure on (R, eps)-flat pants with equidistributed feet.

    Every geodesic gets a jittered grid of feet; the slots are dealt into
    triples to form orbit representatives.  Returns (atoms, delta) with delta
    the equidistribution level of every foot measure.
    """
    n, m = grid
    if (geodesics * n * m) % 3:
        raise ValueError("number of cuff slots must be divisible by 3")
    slots, delta = [], 0.0
    sigmas = {}
    for k in range(geodesics):
        g = f"g{k}"
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) / math.sqrt(2)
        sigmas[g] = R / 2 + eps * z
        pts, d = jittered_grid(CuffTorus(sigmas[g]), n, m, jitter, rng)
        delta = max(delta, d)
        slots.extend((g, p) for p in pts)
    rng.shuffle(slots)
    reps = []
    for k in range(0, len(slots), 3):
        tri = slots[k : k + 3]
        reps.append(
            (PantsClass(tuple(sigmas[g] for g, _ in tri), tuple((g, 1) for g, _ in tri), tuple(p for _, p in tri)), multiplicity)
        )
    return expand(reps), delta
