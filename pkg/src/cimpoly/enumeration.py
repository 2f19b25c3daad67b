"""Exhaustive enumeration of DAGs, orientations, MECs and CIM vertex sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import networkx as nx

from .errors import LimitExceeded
from .graphs import Dag, PDag, UGraph, _acyclic_masks, bit, skeleton, v_structures
from .imset import Imset, characteristic_imset

MAX_FULL_NODES = 5
MAX_SKELETON_EDGES = 20


def _guard_nodes(n: int, unsafe: bool) -> None:
    if n < 1:
        raise LimitExceeded(f"node count must be positive, got {n}")
    if n > MAX_FULL_NODES and not unsafe:
        raise LimitExceeded(
            f"n={n} exceeds the full-space guard of {MAX_FULL_NODES}; pass unsafe=True to override"
        )


def _guard_edges(g: UGraph, unsafe: bool) -> None:
    if g.num_edges > MAX_SKELETON_EDGES and not unsafe:
        raise LimitExceeded(
            f"{g.num_edges} skeleton edges exceed the guard of {MAX_SKELETON_EDGES}"
        )


@dataclass(frozen=True)
class Mec:
    representative: Dag
    imset: Imset
    member_count: int


@dataclass(frozen=True)
class VertexSet:
    """Vertices of CIM_n (``face is None``) or of the face CIM_G (``face`` = G)."""

    n: int
    face: UGraph | None
    mecs: tuple[Mec, ...]

    @property
    def imsets(self) -> list[Imset]:
        return [m.imset for m in self.mecs]

    def __len__(self) -> int:
        return len(self.mecs)

    def index(self, im: Imset) -> int:
        try:
            return self._lookup()[im]
        except KeyError:
            return -1

    def _lookup(self) -> dict[Imset, int]:
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = {m.imset: k for k, m in enumerate(self.mecs)}
            object.__setattr__(self, "_index", cached)
        return cached


def enumerate_dags(n: int, unsafe: bool = False) -> Iterator[Dag]:
    """Every labeled DAG on ``n`` nodes, once each, in a fixed order."""
    _guard_nodes(n, unsafe)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        p = [0] * n
        for (i, j), s in zip(pairs, states):
            if s == 1:
                p[j - 1] |= bit(i)
            elif s == 2:
                p[i - 1] |= bit(j)
        p = tuple(p)
        if _acyclic_masks(n, p):
            yield Dag._from_parents(n, p)


def enumerate_orientations(g: UGraph, unsafe: bool = False) -> Iterator[Dag]:
    """Every acyclic orientation of ``g``, once each."""
    _guard_edges(g, unsafe)
    edges = g.sorted_edges()
    for flips in itertools.product((False, True), repeat=len(edges)):
        p = [0] * g.n
        for (i, j), f in zip(edges, flips):
            if f:
                p[i - 1] |= bit(j)
            else:
                p[j - 1] |= bit(i)
        p = tuple(p)
        if _acyclic_masks(g.n, p):
            yield Dag._from_parents(g.n, p)


def _group(dags, n: int, face: UGraph | None) -> VertexSet:
    groups: dict = {}
    for d in dags:
        key = (skeleton(d), v_structures(d))
        if key in groups:
            groups[key][1] += 1
        else:
            groups[key] = [d, 1]
    mecs = [Mec(rep, characteristic_imset(rep), count) for rep, count in groups.values()]
    mecs.sort(key=lambda m: m.imset.dense())
    return VertexSet(n, face, tuple(mecs))


def enumerate_mecs(n: int, unsafe: bool = False) -> VertexSet:
    """Vertex set of CIM_n: one entry per Markov equivalence class."""
    return _group(enumerate_dags(n, unsafe), n, None)


def enumerate_mecs_skeleton(g: UGraph, unsafe: bool = False) -> VertexSet:
    """Vertex set of the face CIM_G."""
    return _group(enumerate_orientations(g, unsafe), g.n, g)


def mec_members(d: Dag, unsafe: bool = False) -> list[Dag]:
    target = v_structures(d)
    return [o for o in enumerate_orientations(skeleton(d), unsafe) if v_structures(o) == target]


def essential_graph(d: Dag, unsafe: bool = False) -> PDag:
    """Edges oriented alike in every member stay directed; the rest become undirected."""
    members = mec_members(d, unsafe)
    common = set(members[0].edges)
    for m in members[1:]:
        common &= m.edges
    undirected = {tuple(sorted(e)) for e in d.edges if e not in common}
    return PDag(d.n, frozenset(common), frozenset(undirected))


# -- undirected graph families --------------------------------------------


def all_graphs(n: int) -> Iterator[UGraph]:
    """Every labeled undirected graph on ``n`` nodes."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for keep in itertools.product((False, True), repeat=len(pairs)):
        yield UGraph(n, [e for e, k in zip(pairs, keep) if k])


def labeled_trees(n: int) -> Iterator[UGraph]:
    """Every labeled tree on ``n`` nodes (Pruefer codes)."""
    if n == 1:
        yield UGraph(1)
        return
    if n == 2:
        yield UGraph(2, [(1, 2)])
        return
    for code in itertools.product(range(n), repeat=n - 2):
        t = nx.from_prufer_sequence(list(code))
        yield UGraph(n, [(a + 1, b + 1) for a, b in t.edges])


def unlabeled_trees(n: int) -> list[UGraph]:
    """One labeled representative per isomorphism class of trees on ``n`` nodes."""
    if n == 1:
        return [UGraph(1)]
    out = []
    for t in nx.nonisomorphic_trees(n):
        out.append(UGraph(n, [(a + 1, b + 1) for a, b in t.edges]))
    return sorted(out, key=lambda g: g.sorted_edges())


def path_graph(n: int) -> UGraph:
    return UGraph(n, [(i, i + 1) for i in range(1, n)])


def star_graph(k: int) -> UGraph:
    """K_{1,k} with center ``1``."""
    return UGraph(k + 1, [(1, j) for j in range(2, k + 2)])
