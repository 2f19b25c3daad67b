"""Directed and undirected graph primitives on nodes ``1..n``.

Adjacency is stored as per-node bitmasks (bit ``i - 1`` stands for node ``i``),
so node sets are plain ints internally and frozensets at the API surface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import AlreadyAdjacent, CreatesCycle, NotAnEdge, PreconditionViolated

MAX_NODES = 31


def bit(i: int) -> int:
    return 1 << (i - 1)


def mask_of(nodes: Iterable[int]) -> int:
    m = 0
    for i in nodes:
        m |= 1 << (i - 1)
    return m


def nodes_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_NODES:
        raise PreconditionViolated(f"node count must be in 1..{MAX_NODES}, got {n}")


def _acyclic_masks(n: int, parents: tuple[int, ...]) -> bool:
    # Kahn's algorithm over bitmasks
    remaining = (1 << n) - 1
    while remaining:
        sources = 0
        for i in nodes_of(remaining):
            if parents[i - 1] & remaining == 0:
                sources |= bit(i)
        if not sources:
            return False
        remaining &= ~sources
    return True


def is_acyclic(edges: Iterable[tuple[int, int]], n: int) -> bool:
    """True iff the directed edge set on ``1..n`` has no directed cycle."""
    parents = [0] * n
    for i, j in edges:
        if i == j:
            return False
        parents[j - 1] |= bit(i)
    return _acyclic_masks(n, tuple(parents))


@dataclass(frozen=True)
class UGraph:
    n: int
    adj: tuple[int, ...]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        _check_n(n)
        adj = [0] * n
        for i, j in edges:
            if i == j:
                raise PreconditionViolated(f"self-loop at {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise PreconditionViolated(f"edge {i}--{j} outside 1..{n}")
            adj[i - 1] |= bit(j)
            adj[j - 1] |= bit(i)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(adj))

    @classmethod
    def _from_adj(cls, n: int, adj: tuple[int, ...]) -> "UGraph":
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, j) for i in range(1, self.n + 1) for j in nodes_of(self.adj[i - 1]) if i < j
        )

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, i: int) -> frozenset[int]:
        return frozenset(nodes_of(self.adj[i - 1]))

    def degree(self, i: int) -> int:
        return bin(self.adj[i - 1]).count("1")

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adj[i - 1] & bit(j))

    @property
    def num_edges(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2

    def is_tree(self) -> bool:
        if self.num_edges != self.n - 1:
            return False
        seen = bit(1)
        frontier = bit(1)
        while frontier:
            nxt = 0
            for i in nodes_of(frontier):
                nxt |= self.adj[i - 1]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def __repr__(self) -> str:
        body = ", ".join(f"{i}--{j}" for i, j in self.sorted_edges())
        return f"UGraph(n={self.n}, [{body}])"


@dataclass(frozen=True)
class Dag:
    """Immutable DAG; ``parents[i - 1]`` is the parent bitmask of node ``i``."""

    n: int
    parents: tuple[int, ...]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        _check_n(n)
        parents = [0] * n
        for i, j in edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise PreconditionViolated(f"edge {i}->{j} outside 1..{n}")
            if i == j:
                raise CreatesCycle(f"self-loop at {i}")
            parents[j - 1] |= bit(i)
        for j in range(1, n + 1):
            for i in nodes_of(parents[j - 1]):
                if parents[i - 1] & bit(j):
                    raise CreatesCycle(f"both {i}->{j} and {j}->{i} given")
        if not _acyclic_masks(n, tuple(parents)):
            raise CreatesCycle("edge set contains a directed cycle")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "parents", tuple(parents))

    @classmethod
    def _from_parents(cls, n: int, parents: tuple[int, ...]) -> "Dag":
        # caller guarantees acyclicity
        d = object.__new__(cls)
        object.__setattr__(d, "n", n)
        object.__setattr__(d, "parents", parents)
        return d

    @classmethod
    def empty(cls, n: int) -> "Dag":
        _check_n(n)
        return cls._from_parents(n, (0,) * n)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, j) for j in range(1, self.n + 1) for i in nodes_of(self.parents[j - 1])
        )

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def num_edges(self) -> int:
        return sum(bin(p).count("1") for p in self.parents)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.parents[j - 1] & bit(i))

    def children_mask(self, i: int) -> int:
        b = bit(i)
        return mask_of(j for j in range(1, self.n + 1) if self.parents[j - 1] & b)

    def neighbor_mask(self, i: int) -> int:
        return self.parents[i - 1] | self.children_mask(i)

    def __repr__(self) -> str:
        body = ", ".join(f"{i}->{j}" for i, j in self.sorted_edges())
        return f"Dag(n={self.n}, [{body}])"


@dataclass(frozen=True)
class PDag:
    n: int
    directed: frozenset[tuple[int, int]]
    undirected: frozenset[tuple[int, int]]

    def __post_init__(self):
        d = {frozenset(e) for e in self.directed}
        if any(frozenset(e) in d for e in self.undirected):
            raise PreconditionViolated("edge both directed and undirected")

    def is_fully_directed_on(self, edges: Iterable[tuple[int, int]]) -> bool:
        return all(tuple(sorted(e)) not in self.undirected for e in edges)

    def essential_parents(self, i: int) -> frozenset[int]:
        return frozenset(a for a, b in self.directed if b == i)

    def restrict(self, nodes: Iterable[int]) -> "PDag":
        keep = set(nodes)
        return PDag(
            self.n,
            frozenset(e for e in self.directed if e[0] in keep and e[1] in keep),
            frozenset(e for e in self.undirected if e[0] in keep and e[1] in keep),
        )


# -- queries ---------------------------------------------------------------


def parents(d: Dag, i: int) -> frozenset[int]:
    return frozenset(nodes_of(d.parents[i - 1]))


def children(d: Dag, i: int) -> frozenset[int]:
    return frozenset(nodes_of(d.children_mask(i)))


def neighbors(d: Dag, i: int) -> frozenset[int]:
    return frozenset(nodes_of(d.neighbor_mask(i)))


def closure(d: Dag, i: int) -> frozenset[int]:
    return neighbors(d, i) | {i}


def descendants_mask(d: Dag, i: int) -> int:
    seen = bit(i)
    frontier = bit(i)
    while frontier:
        nxt = 0
        for k in nodes_of(frontier):
            nxt |= d.children_mask(k)
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def descendants(d: Dag, i: int) -> frozenset[int]:
    """Descendants of ``i``, including ``i`` itself."""
    return frozenset(nodes_of(descendants_mask(d, i)))


def non_descendants(d: Dag, i: int) -> frozenset[int]:
    return frozenset(range(1, d.n + 1)) - descendants(d, i)


def skeleton(d: Dag) -> UGraph:
    return UGraph._from_adj(d.n, tuple(d.neighbor_mask(i) for i in range(1, d.n + 1)))


def v_structures(d: Dag) -> frozenset[tuple[int, int, int]]:
    """Triples ``(i, j, k)`` with ``i < k`` and ``i -> j <- k``, ``i``, ``k`` non-adjacent."""
    sk = skeleton(d)
    out = set()
    for j in range(1, d.n + 1):
        pa = nodes_of(d.parents[j - 1])
        for a in range(len(pa)):
            for b in range(a + 1, len(pa)):
                i, k = pa[a], pa[b]
                if not sk.adjacent(i, k):
                    out.add((i, j, k))
    return frozenset(out)


def topological_order(d: Dag) -> tuple[int, ...]:
    """Smallest-label-first among available sources."""
    remaining = (1 << d.n) - 1
    order = []
    while remaining:
        for i in nodes_of(remaining):
            if d.parents[i - 1] & remaining == 0:
                order.append(i)
                remaining &= ~bit(i)
                break
    return tuple(order)


# -- surgeries -------------------------------------------------------------


def _with(d: Dag, updates: dict[int, int]) -> tuple[int, ...]:
    p = list(d.parents)
    for j, m in updates.items():
        p[j - 1] = m
    return tuple(p)


def reverse_edge(d: Dag, i: int, j: int) -> Dag:
    """Replace ``i -> j`` by ``j -> i``."""
    if not d.has_edge(i, j):
        raise NotAnEdge(f"{i}->{j} is not an edge")
    p = list(d.parents)
    p[j - 1] &= ~bit(i)
    p[i - 1] |= bit(j)
    p = tuple(p)
    if not _acyclic_masks(d.n, p):
        raise CreatesCycle(f"reversing {i}->{j} creates a cycle")
    return Dag._from_parents(d.n, p)


def add_edge(d: Dag, i: int, j: int) -> Dag:
    """Add the edge ``j -> i`` (so ``j`` becomes a parent of ``i``)."""
    if d.neighbor_mask(i) & bit(j):
        raise AlreadyAdjacent(f"{i} and {j} are already adjacent")
    if i == j:
        raise CreatesCycle("self-loop")
    p = _with(d, {i: d.parents[i - 1] | bit(j)})
    if not _acyclic_masks(d.n, p):
        raise CreatesCycle(f"adding {j}->{i} creates a cycle")
    return Dag._from_parents(d.n, p)


def remove_edge(d: Dag, i: int, j: int) -> Dag:
    """Remove the edge ``j -> i``."""
    if not d.has_edge(j, i):
        raise NotAnEdge(f"{j}->{i} is not an edge")
    return Dag._from_parents(d.n, _with(d, {i: d.parents[i - 1] & ~bit(j)}))


def add_parents(d: Dag, i: int, new: Iterable[int]) -> Dag:
    """Add every ``j -> i`` for ``j`` in ``new``; no adjacency or independence checks."""
    p = list(d.parents)
    for j in new:
        if d.parents[j - 1] & bit(i):
            raise CreatesCycle(f"{i}->{j} already present")
        p[i - 1] |= bit(j)
    p = tuple(p)
    if not _acyclic_masks(d.n, p):
        raise CreatesCycle(f"adding parents to {i} creates a cycle")
    return Dag._from_parents(d.n, p)


def sink_at(d: Dag, i: int) -> Dag:
    """Point every edge at ``i`` inward; always acyclic."""
    b = bit(i)
    p = list(d.parents)
    ch = d.children_mask(i)
    for k in nodes_of(ch):
        p[k - 1] &= ~b
    p[i - 1] |= ch
    return Dag._from_parents(d.n, tuple(p))


def orient(g: UGraph, directed: Iterable[tuple[int, int]]) -> Dag:
    """Orientation of ``g`` given one direction per skeleton edge."""
    d = Dag(g.n, directed)
    if skeleton(d) != g:
        raise PreconditionViolated("orientation does not match the skeleton")
    return d


def relabel(d: Dag, perm: dict[int, int]) -> Dag:
    return Dag(d.n, [(perm[i], perm[j]) for i, j in d.edges])


def induced_edges(d: Dag, nodes: Iterable[int]) -> frozenset[tuple[int, int]]:
    keep = set(nodes)
    return frozenset((i, j) for i, j in d.edges if i in keep and j in keep)


# -- text format -----------------------------------------------------------

_EDGE_RE = re.compile(r"^\s*(\d+)\s*(->|--|<-)\s*(\d+)\s*$")
_HEADER_RE = re.compile(r"^\s*nodes\s*:\s*(\d+)\s*$")


def parse_graph(text: str) -> Dag | UGraph:
    """Parse the ``nodes: n`` / ``i -> j`` / ``i -- j`` text format.

    Returns a ``Dag`` when every edge is directed, a ``UGraph`` when every
    edge is undirected; an edgeless file gives a ``Dag``.
    """
    n = None
    directed: list[tuple[int, int]] = []
    undirected: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise PreconditionViolated(f"line {lineno}: expected 'nodes: <n>' header")
            n = int(m.group(1))
            continue
        m = _EDGE_RE.match(line)
        if not m:
            raise PreconditionViolated(f"line {lineno}: cannot parse edge {raw!r}")
        a, op, b = int(m.group(1)), m.group(2), int(m.group(3))
        if op == "->":
            directed.append((a, b))
        elif op == "<-":
            directed.append((b, a))
        else:
            undirected.append((a, b))
    if n is None:
        raise PreconditionViolated("missing 'nodes: <n>' header")
    if directed and undirected:
        raise PreconditionViolated("mixed directed and undirected edges")
    if undirected:
        return UGraph(n, undirected)
    return Dag(n, directed)


def format_graph(g: Dag | UGraph) -> str:
    op = "->" if isinstance(g, Dag) else "--"
    lines = [f"nodes: {g.n}"] + [f"{i} {op} {j}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def iter_subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask``."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask
