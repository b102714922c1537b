"""Surfaces assembled from marked pants.

Marked pants classes carry the identities of their cuff geodesics so that
admissibility (the glued cuff is the same closed geodesic with the opposite
orientation) can be checked combinatorially.  Feet are stored in the
coordinates of the positively oriented geodesic; the action of A_zeta on a
foot attached to the negatively oriented copy is z -> z - zeta there.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from surfacekit.config import tol
from surfacekit.errors import (
    HalfLengthMismatch,
    NotAdmissible,
    NotLegal,
    NotLoxodromic,
)
from surfacekit.pants import (
    CuffTorus,
    MarkedPants,
    half_length,
    pants_rep,
    perpendicular_feet,
    triple_rot,
)
from surfacekit.psl2c import (
    IDENTITY,
    Isometry,
    a_t,
    axis,
    normalizer,
    perpendicular_position,
    quasi_distance,
    translation_length,
)

J = Isometry.of(0, 1j, 1j, 0)  # z -> 1/z; reverses (0, INF)
I_PI = 1j * math.pi


# ---------------------------------------------------------------------------
# abstract marked pants


@dataclass(frozen=True)
class PantsClass:
    """A marked pants known through its half-lengths, cuff geodesics and feet.

    ``cuffs[n] = (geodesic_id, orientation)`` with orientation +1 or -1;
    ``feet[n]`` is the foot on cuff n in the coordinates of +geodesic_id.
    """

    sigmas: tuple
    cuffs: tuple
    feet: tuple = (0j, 0j, 0j)

    def __post_init__(self):
        object.__setattr__(self, "sigmas", tuple(half_length(s) for s in self.sigmas))
        object.__setattr__(self, "cuffs", tuple((str(g), int(o)) for g, o in self.cuffs))
        object.__setattr__(self, "feet", tuple(complex(f) for f in self.feet))
        if len(self.sigmas) != 3 or len(self.cuffs) != 3 or len(self.feet) != 3:
            raise ValueError("a pants has exactly three cuffs")
        if any(o not in (1, -1) for _, o in self.cuffs):
            raise ValueError("cuff orientation must be +1 or -1")

    @property
    def marked(self) -> tuple:
        return self.cuffs[0]

    def R(self) -> "PantsClass":
        (g1, o1), (g2, o2), (g3, o3) = self.cuffs
        s1, s2, s3 = self.sigmas
        f1, f2, f3 = self.feet
        return PantsClass((s1, s3, s2), ((g1, -o1), (g3, -o3), (g2, -o2)), (f1, f3, f2))

    def rot(self) -> "PantsClass":
        return PantsClass(
            self.sigmas[1:] + self.sigmas[:1],
            self.cuffs[1:] + self.cuffs[:1],
            self.feet[1:] + self.feet[:1],
        )

    def pants(self) -> MarkedPants:
        return pants_rep(*self.sigmas)

    def same(self, other: "PantsClass", atol: float = 1e-9) -> bool:
        return (
            self.cuffs == other.cuffs
            and all(abs(a - b) <= atol for a, b in zip(self.sigmas, other.sigmas))
            and all(abs(a - b) <= atol for a, b in zip(self.feet, other.feet))
        )


@dataclass
class Labeling:
    elements: list
    label: dict
    invol: dict
    tricycle: dict

    def validate(self) -> None:
        for e in self.elements:
            r, t = self.invol[e], self.tricycle[e]
            if self.invol[r] != e:
                raise NotLegal(f"R_E is not an involution at {e!r}")
            if self.tricycle[self.tricycle[t]] != e:
                raise NotLegal(f"rot_E has no order 3 at {e!r}")
            if not self.label[r].same(self.label[e].R()):
                raise NotLegal(f"label(R_E e) != R(label e) at {e!r}")
            if not self.label[t].same(self.label[e].rot()):
                raise NotLegal(f"label(rot_E e) != rot(label e) at {e!r}")


@dataclass
class AdmissibleInvolution:
    tau: dict

    def validate(self, lab: Labeling) -> None:
        for e in lab.elements:
            f = self.tau[e]
            if f == e or self.tau[f] != e:
                raise NotAdmissible(f"tau is not a fixed-point-free involution at {e!r}")
            g, o = lab.label[e].marked
            g2, o2 = lab.label[f].marked
            if g != g2 or o != -o2:
                raise NotAdmissible(f"tau({e!r}) is not marked by the reversed geodesic")


# ---------------------------------------------------------------------------
# graph


@dataclass(frozen=True)
class Vertex:
    elements: tuple  # (e, rot e, rot^2 e)
    sigmas: tuple


@dataclass(frozen=True)
class Edge:
    u: int
    i: int
    v: int
    j: int
    sigma: complex
    elements: tuple  # (e, tau e)
    foot_shear: complex | None = None


@dataclass
class PantsGraph:
    vertices: list
    edges: list
    dropped_vertices: int = 0

    @property
    def euler_characteristic(self) -> int:
        return -len(self.vertices)

    @property
    def genus(self) -> int:
        return 1 + len(self.vertices) // 2

    def slot_edge(self) -> dict:
        out = {}
        for k, ed in enumerate(self.edges):
            out[(ed.u, ed.i)] = (k, +1)
            out[(ed.v, ed.j)] = (k, -1)
        return out


def build_graph(lab: Labeling, tau: AdmissibleInvolution) -> PantsGraph:
    lab.validate()
    tau.validate(lab)
    seen, orbits = set(), []
    for e in lab.elements:
        if e in seen:
            continue
        orb = (e, lab.tricycle[e], lab.tricycle[lab.tricycle[e]])
        seen.update(orb)
        orbits.append(orb)
    where = {}
    for vi, orb in enumerate(orbits):
        for slot, e in enumerate(orb):
            where[e] = (vi, slot)
    edges_all, done = [], set()
    for e in lab.elements:
        if e in done:
            continue
        f = tau.tau[e]
        done.update((e, f))
        u, i = where[e]
        v, j = where[f]
        le, lf = lab.label[e], lab.label[f]
        _, o = le.marked
        # shear read off the stored feet: A_{t + i pi} p(e) = p(tau e)
        t = o * (lf.feet[0] - le.feet[0]) - I_PI
        edges_all.append(Edge(u, i, v, j, le.sigmas[0], (e, f), t))
    # keep the component of the lowest-index vertex
    adj = {k: [] for k in range(len(orbits))}
    for ed in edges_all:
        adj[ed.u].append(ed.v)
        adj[ed.v].append(ed.u)
    comp, queue = {0}, deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in comp:
                comp.add(y)
                queue.append(y)
    keep = sorted(comp)
    renum = {old: new for new, old in enumerate(keep)}
    vertices = [Vertex(orbits[k], lab.label[orbits[k][0]].sigmas) for k in keep]
    edges = [
        Edge(renum[ed.u], ed.i, renum[ed.v], ed.j, ed.sigma, ed.elements, ed.foot_shear)
        for ed in edges_all
        if ed.u in comp
    ]
    return PantsGraph(vertices, edges, len(orbits) - len(keep))


def theta_labeling(sigmas=(4.0, 4.0, 4.0), feet=(0j, 0j, 0j), names=("a", "b", "c")):
    """Smallest legal labeling: one pants and its R-image, cuffs paired across."""
    pc = PantsClass(sigmas, tuple((n, 1) for n in names), feet)
    lab = labeling_from_classes([pc], [1])
    tau = {}
    for e in lab.elements:
        g, o = lab.label[e].marked
        for f in lab.elements:
            if lab.label[f].marked == (g, -o) and f[0] != e[0]:
                tau[e] = f
    return lab, AdmissibleInvolution(tau)


def labeling_from_classes(classes, counts) -> Labeling:
    """E(j, k) index scheme: odd rows carry rot^k(P_s), even rows R(rot^k(P_s)).

    rot_E moves k forward on odd rows and backward on even rows, since
    rot o R = R o rot^-1.
    """
    elements, label, invol, tric = [], {}, {}, {}
    j = 0
    for pc, n in zip(classes, counts):
        for _ in range(int(n)):
            for parity in (1, 0):
                j += 1
                for k in range(3):
                    base = pc
                    for _ in range(k):
                        base = base.rot()
                    e = (j, k)
                    elements.append(e)
                    label[e] = base if parity else base.R()
    for j, k in elements:
        odd = j % 2 == 1
        invol[(j, k)] = (j + 1 if odd else j - 1, k)
        tric[(j, k)] = (j, (k + (1 if odd else -1)) % 3)
    return Labeling(elements, label, invol, tric)


# ---------------------------------------------------------------------------
# gluing


def _rotated(p: MarkedPants, i: int) -> MarkedPants:
    for _ in range(i):
        p = triple_rot(p)
    return p


@dataclass
class SurfaceRep:
    """Per-vertex pants in local frames plus per-edge transitions.

    ``transitions[k]`` takes v-local to u-local coordinates for edge k = (u, v).
    Global copies are obtained through the spanning-tree ``placement``;
    everything edge-local is computed from the transitions, which keeps
    entries of size e^{R} even on large graphs.
    """

    graph: PantsGraph
    shears: list
    local: list
    transitions: list
    placement: list  # P_v: local -> global
    tree: set
    frames: dict = field(default_factory=dict)

    @property
    def gluing(self) -> list:
        """Per edge: element taking v's placed copy next to u's (identity on tree edges)."""
        out = []
        for k, ed in enumerate(self.graph.edges):
            G = self.placement[ed.u] @ self.transitions[k] @ self.placement[ed.v].inv()
            out.append(IDENTITY if k in self.tree and G.isclose(IDENTITY, 1e-6) else G)
        return out

    @property
    def placed(self) -> list:
        return [p.conj(P) for p, P in zip(self.local, self.placement)]

    def edge_pair(self, k: int) -> tuple:
        """Both pants at edge k in u's frame, each rotated so the shared cuff comes first."""
        ed = self.graph.edges[k]
        pu = _rotated(self.local[ed.u], ed.i)
        pv = _rotated(self.local[ed.v], ed.j).conj(self.transitions[k])
        return pu, pv

    def conj(self, h: Isometry) -> "SurfaceRep":
        return SurfaceRep(
            self.graph, self.shears, self.local, self.transitions,
            [h @ P for P in self.placement], self.tree, self.frames,
        )


def _local_frame(p: MarkedPants, i: int):
    q = _rotated(p, i)
    (lo, _), _ = perpendicular_feet(q, 0)
    return normalizer(axis(q.gamma1)), lo


def transition(Nu, zu, Nv, zv, t) -> Isometry:
    """Element taking v-local to u-local coordinates for shear t."""
    c = t + I_PI + zu + zv
    return Nu.inv() @ a_t(c) @ J @ Nv


def glue(graph: PantsGraph, shears) -> SurfaceRep:
    shears = [complex(t) for t in shears]
    if len(shears) != len(graph.edges):
        raise ValueError("one shear per edge is required")
    local = [pants_rep(*v.sigmas) for v in graph.vertices]
    frames = {}
    for vi, p in enumerate(local):
        for i in range(3):
            frames[(vi, i)] = _local_frame(p, i)
    for ed in graph.edges:
        su = graph.vertices[ed.u].sigmas[ed.i]
        sv = graph.vertices[ed.v].sigmas[ed.j]
        if abs(su - sv) > tol().roundtrip:
            raise HalfLengthMismatch(f"edge ({ed.u},{ed.i})-({ed.v},{ed.j}): {su} vs {sv}")

    def T(k, forward):
        ed = graph.edges[k]
        t = shears[k]
        Nu, zu = frames[(ed.u, ed.i)]
        Nv, zv = frames[(ed.v, ed.j)]
        if forward:
            return transition(Nu, zu, Nv, zv, t)
        return transition(Nv, zv, Nu, zu, t)

    transitions = [T(k, True) for k in range(len(graph.edges))]
    n = len(graph.vertices)
    placement = [None] * n
    placement[0] = IDENTITY
    tree = set()
    incident = {k: [] for k in range(n)}
    for k, ed in enumerate(graph.edges):
        incident[ed.u].append((k, True))
        if ed.v != ed.u:
            incident[ed.v].append((k, False))
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for k, forward in sorted(incident[x]):
            ed = graph.edges[k]
            y = ed.v if forward else ed.u
            if placement[y] is None:
                step = transitions[k] if forward else transitions[k].inv()
                placement[y] = placement[x] @ step
                tree.add(k)
                queue.append(y)
    return SurfaceRep(graph, shears, local, transitions, placement, tree, frames)


def shear_between(pu: MarkedPants, pv: MarkedPants) -> complex:
    """Shear across gamma1 of pu, glued to pv (whose gamma1 is its inverse).

    Measured at the lower perpendicular feet, shifted by i pi, as the
    representative nearest 1.
    """
    ax = axis(pu.gamma1)
    (zu, _), _ = perpendicular_feet(pu, 0)
    (_, m), _ = perpendicular_feet(pv, 0)
    zv = perpendicular_position(ax, axis(pv[m]))
    torus = CuffTorus(translation_length(pu.gamma1) / 2)
    return torus.nearest(zv - zu - I_PI, 1.0)


def extract_shear(rep: SurfaceRep, k: int, side: str = "u") -> complex:
    """Shear on edge k, the representative nearest 1 in C/(sigma Z + 2 pi i Z)."""
    pu, pv = rep.edge_pair(k)
    if side == "v":
        pu, pv = pv, pu
    return shear_between(pu, pv)


def _size(g: Isometry) -> float:
    return max(1.0, max(abs(x) for x in g.lift.entries()))


def gluing_residual(rep: SurfaceRep, k: int) -> float:
    """Mismatch between the u-cuff and the inverse of the glued v-cuff.

    Measured by quasi_distance relative to |T|^2 |gamma|, the scale of the
    rounding error of the conjugation T gamma T^-1.
    """
    ed = rep.graph.edges[k]
    pu, pv = rep.edge_pair(k)
    scale = _size(rep.transitions[k]) ** 2 * _size(rep.local[ed.v][ed.j])
    return quasi_distance(pu.gamma1, pv.gamma1.inv()) / scale


def is_flat_rep(rep: SurfaceRep, R: float, eps: float) -> bool:
    for v in rep.graph.vertices:
        if any(abs(s - R / 2) > eps for s in v.sigmas):
            return False
    for k in range(len(rep.graph.edges)):
        if abs(extract_shear(rep, k) - 1) > eps / R:
            return False
    return True


# ---------------------------------------------------------------------------
# words in the fundamental group


@dataclass(frozen=True)
class Word:
    """Closed path at vertex 0: alternating twists and edge crossings.

    Letters are ("twist", vertex, cuff, +-1) or ("cross", edge, +-1).
    """

    letters: tuple

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        parts = []
        for L in self.letters:
            if L[0] == "twist":
                parts.append(f"c{L[1]}.{L[2]}{'' if L[3] > 0 else '^-1'}")
            else:
                parts.append(f"e{L[1]}{'' if L[2] > 0 else '^-1'}")
        return " ".join(parts) if parts else "1"


def _cuff(rep: SurfaceRep, v: int, a: int, s: int) -> Isometry:
    g = rep.local[v][a]
    return g if s > 0 else g.inv()


def closed_words(rep: SurfaceRep, max_length: int) -> Iterator[tuple]:
    """Reduced closed words of length <= max_length with their holonomy.

    Inside a pants entered through cuff j and left through cuff k only the
    third cuff may twist (twists about j or k are absorbed by the neighbours),
    and leaving back through the entry edge requires a twist; with these rules
    every word is reduced in the graph-of-groups sense and so represents a
    nontrivial element.  Words of edge length 0 are reduced words in the root
    pants group on gamma1, gamma2.
    """
    graph = rep.graph
    slot = graph.slot_edge()

    # edge length 0
    gens = [(0, 0, 1), (0, 0, -1), (0, 1, 1), (0, 1, -1)]

    def free(prefix, W, last):
        if prefix:
            yield Word(tuple(("twist",) + g for g in prefix)), W
        if len(prefix) >= max_length:
            return
        for g in gens:
            if last is not None and g[1] == last[1] and g[2] == -last[2]:
                continue
            yield from free(prefix + [g], W @ _cuff(rep, *g), g)

    yield from free([], IDENTITY, None)

    def twists(v, banned):
        yield None
        for a in range(3):
            if a not in banned:
                yield (v, a, 1)
                yield (v, a, -1)

    def walk(v, entry, W, letters, length):
        # close at the root
        if v == 0 and entry is not None:
            for g in twists(v, {entry}):
                cost = length + (g is not None)
                if cost <= max_length:
                    WW = W if g is None else W @ _cuff(rep, *g)
                    yield Word(tuple(letters + ([("twist",) + g] if g else []))), WW
        if length >= max_length:
            return
        for k in range(3):
            back = entry is not None and k == entry
            banned = {k} if entry is None else {entry, k}
            for g in twists(v, banned):
                if back and g is None:
                    continue
                cost = length + 1 + (g is not None)
                if cost > max_length:
                    continue
                e, direction = slot[(v, k)]
                ed = graph.edges[e]
                G = rep.transitions[e] if direction > 0 else rep.transitions[e].inv()
                nxt, nentry = (ed.v, ed.j) if direction > 0 else (ed.u, ed.i)
                WW = W if g is None else W @ _cuff(rep, *g)
                WW = WW @ G
                new = letters + ([("twist",) + g] if g else []) + [("cross", e, direction)]
                yield from walk(nxt, nentry, WW, new, cost)

    yield from walk(0, None, IDENTITY, [], 0)


@dataclass
class InjectivityReport:
    word_count: int
    min_translation: float
    min_quasi_distance: float
    worst_word: str
    failures: list
    max_imag_trace: float

    @property
    def passed(self) -> bool:
        return not self.failures and self.min_translation > 0


def injectivity_certificate(rep: SurfaceRep, L: int, table: list | None = None) -> InjectivityReport:
    count, min_t, min_q, worst, fails, max_im = 0, math.inf, math.inf, "", [], 0.0
    for word, W in closed_words(rep, L):
        count += 1
        tr = W.trace
        max_im = max(max_im, abs(tr.imag) / max(1.0, abs(tr)))
        q = quasi_distance(IDENTITY, W)
        min_q = min(min_q, q)
        try:
            ell = translation_length(W)
        except NotLoxodromic:
            fails.append(str(word))
            if table is not None:
                table.append((str(word), tr, None))
            continue
        if table is not None:
            table.append((str(word), tr, ell))
        if ell.real < min_t:
            min_t, worst = ell.real, str(word)
    if fails:
        min_t = 0.0
    return InjectivityReport(count, min_t, min_q, worst, fails, max_im)


def fuchsian_trace_defect(rep: SurfaceRep, L: int) -> float:
    """max |Im tr| / max(1, |tr|) over closed words of length <= L."""
    worst = 0.0
    for _, W in closed_words(rep, L):
        tr = W.trace
        worst = max(worst, abs(tr.imag) / max(1.0, abs(tr)))
    return worst


def glue_from_feet(graph: PantsGraph) -> SurfaceRep:
    """Glue with the shears recorded by the feet, each taken nearest 1."""
    shears = [CuffTorus(ed.sigma).nearest(ed.foot_shear, 1.0) for ed in graph.edges]
    return glue(graph, shears)


def theta_surface(R: float = 8.0, t: complex = 1.0) -> SurfaceRep:
    lab, tau = theta_labeling((R / 2, R / 2, R / 2))
    graph = build_graph(lab, tau)
    return glue(graph, [t] * len(graph.edges))


# ---------------------------------------------------------------------------
# type-R geometry


def cuff_distance_typeR(R: float) -> float:
    """Distance between two boundary cuffs of the pants with all cuffs of length R.

    Right-angled hexagon with alternate sides R/2: cosh d = c / (c - 1) with
    c = cosh(R/2), rewritten as 2 asinh(1 / (2 sinh(R/4))) for stability.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    return 2.0 * math.asinh(1.0 / (2.0 * math.sinh(R / 4.0)))


from surfacekit.typer import CrossingReport, crossing_count  # noqa: E402

__all__ = [
    "AdmissibleInvolution",
    "CrossingReport",
    "Edge",
    "InjectivityReport",
    "Labeling",
    "PantsClass",
    "PantsGraph",
    "SurfaceRep",
    "Vertex",
    "Word",
    "build_graph",
    "closed_words",
    "crossing_count",
    "cuff_distance_typeR",
    "extract_shear",
    "fuchsian_trace_defect",
    "glue",
    "glue_from_feet",
    "gluing_residual",
    "injectivity_certificate",
    "is_flat_rep",
    "labeling_from_classes",
    "theta_labeling",
    "theta_surface",
    "transition",
]
