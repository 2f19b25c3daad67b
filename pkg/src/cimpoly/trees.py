"""Edges of CIM_G when G is a tree: Delta, span, essential flips and the
local subtree-condition table."""

from __future__ import annotations

from dataclasses import dataclass, field

from .enumeration import essential_graph, mec_members
from .errors import (
    DifferenceNotSubtree,
    EmptyDelta,
    EmptySet,
    MarkovEquivalentInput,
    NotATree,
    SkeletonMismatch,
)
from .graphs import Dag, PDag, UGraph, bit, iter_subsets, nodes_of, skeleton, v_structures
from .imset import characteristic_imset, markov_equivalent


@dataclass
class FlipReport:
    verdict: bool
    delta: frozenset[int]
    span_nodes: frozenset[int]
    cases: dict[int, str] = field(default_factory=dict)
    reason: str | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "delta": sorted(self.delta),
            "span": sorted(self.span_nodes),
            "cases": {str(k): v for k, v in sorted(self.cases.items())},
            "reason": self.reason,
        }


def _shared_tree(a: Dag, b: Dag) -> UGraph:
    g = skeleton(a)
    if skeleton(b) != g:
        raise SkeletonMismatch("DAGs have different skeletons")
    if not g.is_tree():
        raise NotATree("skeleton is not a tree")
    return g


def _local_pattern(d: Dag, g: UGraph, i: int) -> frozenset[int]:
    """Ones of c_d restricted to N_i = {S u {i} : S in ne(i), |S| >= 2}."""
    b = bit(i)
    out = set()
    for s in iter_subsets(g.adj[i - 1]):
        if bin(s).count("1") < 2:
            continue
        m = s | b
        # c(S u {i}) through the general definition, not the tree shortcut
        hit = False
        for k in nodes_of(m):
            if (m & ~bit(k)) & ~d.parents[k - 1] == 0:
                hit = True
                break
        if hit:
            out.add(m)
    return frozenset(out)


def delta_by_imset(a: Dag, b: Dag) -> frozenset[int]:
    g = _shared_tree(a, b)
    return frozenset(
        i for i in range(1, g.n + 1) if _local_pattern(a, g, i) != _local_pattern(b, g, i)
    )


def delta_by_vstructures(a: Dag, b: Dag) -> frozenset[int]:
    _shared_tree(a, b)
    va, vb = v_structures(a), v_structures(b)
    return frozenset(j for _, j, _ in va ^ vb)


def delta(a: Dag, b: Dag) -> frozenset[int]:
    """Nodes whose neighbourhood imset coordinates differ between ``a`` and ``b``."""
    x = delta_by_imset(a, b)
    y = delta_by_vstructures(a, b)
    if x != y:
        raise AssertionError(f"Delta characterizations disagree: {sorted(x)} vs {sorted(y)}")
    return x


def tree_path_nodes(g: UGraph, s: int, t: int) -> list[int]:
    prev = {s: None}
    frontier = [s]
    while frontier and t not in prev:
        nxt = []
        for a in frontier:
            for c in nodes_of(g.adj[a - 1]):
                if c not in prev:
                    prev[c] = a
                    nxt.append(c)
        frontier = nxt
    out = [t]
    while out[-1] != s:
        out.append(prev[out[-1]])
    return out[::-1]


def span(g: UGraph, S) -> frozenset[int]:
    """Node set of the smallest subtree of ``g`` containing ``S``."""
    if not g.is_tree():
        raise NotATree("graph is not a tree")
    S = sorted(set(S))
    if not S:
        raise EmptySet("span of the empty set")
    out = {S[0]}
    for t in S[1:]:
        out.update(tree_path_nodes(g, S[0], t))
    return frozenset(out)


def _span_edges(g: UGraph, nodes: frozenset[int]) -> list[tuple[int, int]]:
    return [(i, j) for i, j in g.sorted_edges() if i in nodes and j in nodes]


def _orientation(p: PDag, i: int, j: int) -> tuple[int, int] | None:
    if (i, j) in p.directed:
        return (i, j)
    if (j, i) in p.directed:
        return (j, i)
    return None


def is_essential_flip(a: Dag, b: Dag) -> FlipReport:
    """Whether the essential graphs of ``a`` and ``b`` form an essential flip.

    On the span of Delta both essential graphs must be fully directed and
    every edge there must be oriented oppositely; edges off the span are
    unconstrained.
    """
    g = _shared_tree(a, b)
    if markov_equivalent(a, b):
        raise MarkovEquivalentInput("inputs are Markov equivalent")
    dl = delta(a, b)
    sp = span(g, dl)
    ea, eb = essential_graph(a), essential_graph(b)
    for i, j in _span_edges(g, sp):
        oa, ob = _orientation(ea, i, j), _orientation(eb, i, j)
        if oa is None or ob is None:
            which = "first" if oa is None else "second"
            return FlipReport(False, dl, sp, reason=f"edge {i}-{j} undirected in the {which} essential graph")
        if oa == ob:
            return FlipReport(False, dl, sp, reason=f"edge {i}-{j} oriented alike as {oa[0]}->{oa[1]}")
    return FlipReport(True, dl, sp)


def _components_without(g_edges: list[tuple[int, int]], nodes: set[int], drop: int) -> list[set[int]]:
    rest = nodes - {drop}
    adj = {x: set() for x in rest}
    for i, j in g_edges:
        if i in rest and j in rest:
            adj[i].add(j)
            adj[j].add(i)
    comps = []
    seen = set()
    for x in sorted(rest):
        if x in seen:
            continue
        comp = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for z in adj[y]:
                if z not in comp:
                    comp.add(z)
                    stack.append(z)
        seen |= comp
        comps.append(comp)
    return comps


def _has_vstructure_at(d: Dag, j: int) -> bool:
    # any two parents in a tree are non-adjacent
    return bin(d.parents[j - 1]).count("1") >= 2


def subtree_condition(a: Dag, b: Dag) -> FlipReport:
    """Evaluate the per-node table (rows I-VI) for DAGs differing on a subtree."""
    g = _shared_tree(a, b)
    diff = sorted(e for e in a.edges if e not in b.edges)
    if not diff:
        raise DifferenceNotSubtree("DAGs are identical")
    t_nodes = {x for e in diff for x in e}
    t_undirected = [tuple(sorted(e)) for e in diff]
    if len(_components_without(t_undirected, t_nodes | {0}, 0)) != 1:  # 0 is not a node
        raise DifferenceNotSubtree("differing edges do not form a subtree")
    dl = delta(a, b)
    if not dl:
        raise EmptyDelta("Delta is empty")
    ea, eb = essential_graph(a), essential_graph(b)
    t_set = set(diff)
    cases: dict[int, str] = {}
    failure = None
    for i in sorted(t_nodes):
        tpa = [k for k in nodes_of(a.parents[i - 1]) if (k, i) in t_set]
        tch = [k for k in nodes_of(a.children_mask(i)) if (i, k) in t_set]
        if len(tpa) + len(tch) < 2:
            continue
        outside_pa = [k for k in nodes_of(a.parents[i - 1]) if (k, i) not in t_set]
        np_, nc = len(tpa), len(tch)
        if np_ >= 2 and nc >= 2:
            label, ok = "I", True
        elif np_ >= 2 and nc == 0:
            label, ok = "II", True
        elif np_ == 0 and nc >= 2:
            label, ok = "III", True
        elif np_ >= 2 and nc == 1:
            label = "IV"
            c = tch[0]
            ok = bool(outside_pa) or (not _has_vstructure_at(a, c) or bool(eb.essential_parents(c)))
        elif np_ == 1 and nc >= 2:
            label = "V"
            p = tpa[0]
            ok = bool(outside_pa) or (not _has_vstructure_at(b, p) or bool(ea.essential_parents(p)))
        else:
            label = "VI"
            c, p = tch[0], tpa[0]
            comps = _components_without(t_undirected, t_nodes, i)
            both = len(comps) == 2 and all(comp & dl for comp in comps)
            ok = (not both) or bool(outside_pa) or (
                bool(eb.essential_parents(c)) and bool(ea.essential_parents(p))
            )
        cases[i] = label
        if not ok and failure is None:
            failure = f"node {i} fails row {label}"
    return FlipReport(failure is None, dl, span(g, dl), cases, failure)


def subtree_condition_classes(a: Dag, b: Dag) -> FlipReport:
    """Table verdict for the MECs of ``a`` and ``b``.

    Scans member pairs in enumeration order and evaluates the table on the
    first pair whose difference is a subtree. When no such pair exists the
    classes cannot form an essential flip and the verdict is false.
    """
    g = _shared_tree(a, b)
    if markov_equivalent(a, b):
        raise MarkovEquivalentInput("inputs are Markov equivalent")
    for x in mec_members(a):
        for y in mec_members(b):
            try:
                return subtree_condition(x, y)
            except DifferenceNotSubtree:
                continue
    dl = delta(a, b)
    return FlipReport(False, dl, span(g, dl), reason="no member pair differs on a subtree")


def internal_nodes(g: UGraph) -> list[int]:
    return [i for i in range(1, g.n + 1) if g.degree(i) >= 2]


def longest_path_length(g: UGraph) -> int:
    """Edge count of a longest path (tree diameter), by double BFS."""
    if not g.is_tree():
        raise NotATree("graph is not a tree")

    def farthest(s):
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y in nodes_of(g.adj[x - 1]):
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        far = max(dist, key=lambda k: (dist[k], -k))
        return far, dist[far]

    x, _ = farthest(1)
    _, p = farthest(x)
    return p


def tree_bounds(g: UGraph) -> tuple[int, int]:
    """``(floor(p / 2), m)``: longest-path and internal-node diameter bounds."""
    if not g.is_tree():
        raise NotATree("graph is not a tree")
    return longest_path_length(g) // 2, len(internal_nodes(g))


def local_imset(d: Dag, i: int):
    """c_d restricted to N_i (as ones), exposed for path constructions."""
    return _local_pattern(d, skeleton(d), i)


def same_local(a: Dag, b: Dag, i: int) -> bool:
    return local_imset(a, i) == local_imset(b, i)
