import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cimpoly.enumeration import (
    enumerate_mecs_skeleton,
    enumerate_orientations,
    labeled_trees,
    path_graph,
    star_graph,
)
from cimpoly.errors import DifferenceNotSubtree, EmptyDelta, EmptySet, MarkovEquivalentInput, NotATree
from cimpoly.geometry import EdgeOracle
from cimpoly.graphs import Dag, UGraph
from cimpoly.imset import characteristic_imset, markov_equivalent
from cimpoly.trees import (
    delta,
    delta_by_imset,
    delta_by_vstructures,
    is_essential_flip,
    span,
    subtree_condition,
    subtree_condition_classes,
    tree_bounds,
)

CHAIN = Dag(3, [(1, 2), (2, 3)])
COLLIDER = Dag(3, [(1, 2), (3, 2)])


def test_delta_examples():
    assert delta(CHAIN, CHAIN) == frozenset()
    assert delta(CHAIN, COLLIDER) == {2}


@st.composite
def tree_pairs(draw):
    n = draw(st.integers(2, 6))
    code = draw(st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2))
    # decode a Pruefer sequence by hand
    degree = [1] * (n + 1)
    for x in code:
        degree[x] += 1
    edges = []
    for x in code:
        leaf = min(i for i in range(1, n + 1) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(1, n + 1) if degree[i] == 1]
    edges.append((u, v))
    flips = [draw(st.lists(st.booleans(), min_size=n - 1, max_size=n - 1)) for _ in range(2)]
    a, b = (Dag(n, [(j, i) if f else (i, j) for (i, j), f in zip(edges, fl)]) for fl in flips)
    return a, b


@settings(max_examples=150, deadline=None)
@given(tree_pairs())
def test_delta_characterizations_agree(pair):
    a, b = pair
    assert delta_by_imset(a, b) == delta_by_vstructures(a, b)
    assert (delta(a, b) == frozenset()) == markov_equivalent(a, b)


def test_span_examples():
    path5 = path_graph(5)
    assert span(path5, {3}) == {3}
    assert span(path5, {1, 5}) == {1, 2, 3, 4, 5}
    assert span(star_graph(4), {2, 4}) == {1, 2, 4}
    with pytest.raises(EmptySet):
        span(path5, set())
    with pytest.raises(NotATree):
        span(UGraph(3, [(1, 2), (2, 3), (1, 3)]), {1})


def test_flip_examples():
    assert is_essential_flip(CHAIN, COLLIDER).verdict
    far = Dag(5, [(1, 2), (3, 2), (3, 4), (5, 4)])
    out = Dag(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    report = is_essential_flip(out, far)
    assert not report.verdict and report.reason
    assert report.delta == {2, 4} and report.span_nodes == {2, 3, 4}
    vs = enumerate_mecs_skeleton(path_graph(5))
    assert not EdgeOracle(vs)(characteristic_imset(out), characteristic_imset(far))
    with pytest.raises(MarkovEquivalentInput):
        is_essential_flip(CHAIN, Dag(3, [(3, 2), (2, 1)]))


def test_star_pairs_all_flip():
    vs = enumerate_mecs_skeleton(star_graph(3))
    reps = [m.representative for m in vs.mecs]
    for a, b in itertools.combinations(reps, 2):
        assert is_essential_flip(a, b).verdict


def test_flip_symmetry():
    for g in labeled_trees(4):
        reps = [m.representative for m in enumerate_mecs_skeleton(g).mecs]
        for a, b in itertools.permutations(reps, 2):
            assert is_essential_flip(a, b).verdict == is_essential_flip(b, a).verdict


def test_table_rows():
    # star center 1: leaves 2, 3 parents, 4, 5 children in a; all reversed in b
    a = Dag(5, [(2, 1), (3, 1), (1, 4), (1, 5)])
    b = Dag(5, [(1, 2), (1, 3), (4, 1), (5, 1)])
    assert subtree_condition(a, b).cases == {1: "I"}
    a = Dag(4, [(2, 1), (3, 1), (4, 1)])
    b = Dag(4, [(1, 2), (1, 3), (1, 4)])
    assert subtree_condition(a, b).cases == {1: "II"}
    assert subtree_condition(b, a).cases == {1: "III"}
    # row IV at node 1 with a parent outside T passes
    a = Dag(5, [(2, 1), (3, 1), (1, 4), (5, 1)])
    b = Dag(5, [(1, 2), (1, 3), (4, 1), (5, 1)])
    rep = subtree_condition(a, b)
    assert rep.cases == {1: "IV"} and rep.verdict


def test_table_errors():
    with pytest.raises(DifferenceNotSubtree):
        subtree_condition(CHAIN, CHAIN)
    a = Dag(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    b = Dag(5, [(2, 1), (2, 3), (3, 4), (5, 4)])
    with pytest.raises(DifferenceNotSubtree):
        subtree_condition(a, b)
    with pytest.raises(EmptyDelta):
        subtree_condition(CHAIN, Dag(3, [(2, 1), (2, 3)]))


def _master(n):
    disagreements = 0
    for g in labeled_trees(n):
        vs = enumerate_mecs_skeleton(g)
        oracle = EdgeOracle(vs)
        reps = [m.representative for m in vs.mecs]
        for x, y in itertools.combinations(range(len(vs)), 2):
            e = oracle(vs.imsets[x], vs.imsets[y])
            f = is_essential_flip(reps[x], reps[y]).verdict
            s = subtree_condition_classes(reps[x], reps[y]).verdict
            disagreements += not (e == f == s)
    return disagreements


@pytest.mark.parametrize("n", [3, 4])
def test_flip_table_and_lp_agree(n):
    assert _master(n) == 0


def test_subtree_pairs_agree_with_flip():
    # every orientation pair whose difference is a subtree, on all 4-node trees
    for g in labeled_trees(4):
        orients = list(enumerate_orientations(g))
        for a, b in itertools.permutations(orients, 2):
            if markov_equivalent(a, b):
                continue
            try:
                rep = subtree_condition(a, b)
            except DifferenceNotSubtree:
                continue
            assert rep.verdict == is_essential_flip(a, b).verdict


def test_tree_bounds_examples():
    assert tree_bounds(path_graph(5)) == (2, 3)
    assert tree_bounds(star_graph(4)) == (1, 1)
    assert tree_bounds(path_graph(2)) == (0, 0)
    with pytest.raises(NotATree):
        tree_bounds(UGraph(3, [(1, 2)]))


def test_single_edge_face_has_one_vertex():
    assert len(enumerate_mecs_skeleton(path_graph(2))) == 1


def test_pendant_node_preserves_verdicts():
    for n in (3, 4):
        for g in labeled_trees(n):
            reps = [m.representative for m in enumerate_mecs_skeleton(g).mecs]
            for r in (i for i in range(1, n + 1) if g.degree(i) >= 2):
                def grow(d):
                    return Dag(n + 1, sorted(d.edges) + [(r, n + 1)])

                for a, b in itertools.combinations(reps, 2):
                    assert is_essential_flip(a, b).verdict == is_essential_flip(grow(a), grow(b)).verdict
