import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from cimpoly.enumeration import enumerate_mecs, enumerate_mecs_skeleton, star_graph
from cimpoly.errors import NotAVertex, PreconditionViolated
from cimpoly.geometry import (
    EdgeCertificate,
    EdgeOracle,
    affine_dimension,
    decide_edge,
    diameter,
    distance,
    edge_graph,
    evaluate,
    is_edge,
    midpoint_oracle,
    non_edge_witness,
    parallelogram_witness,
    realizing_set_certificate,
    verify_certificate,
    verify_non_edge,
)
from cimpoly.graphs import Dag
from cimpoly.imset import Imset, characteristic_imset, coordinates

CHAIN = Dag(3, [(1, 2), (2, 3)])
COLLIDER = Dag(3, [(1, 2), (3, 2)])


def float_delta(u, v, vs) -> float:
    """Primal adjacency LP in floating point (scipy), a second route."""
    X = np.array([im.dense() for im in vs.imsets], dtype=float)
    iu, iv = vs.index(u), vs.index(v)
    d = X.shape[1]
    # variables: w (d), c, delta ; maximize delta
    cost = np.zeros(d + 2)
    cost[-1] = -1
    A_eq = [np.r_[X[iu], -1, 0], np.r_[X[iv], -1, 0]]
    A_ub = [np.r_[X[k], -1, 1] for k in range(len(vs)) if k not in (iu, iv)]
    bounds = [(-1, 1)] * d + [(None, None), (None, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(len(A_ub)), A_eq=A_eq, b_eq=[0, 0], bounds=bounds, method="highs")
    return -res.fun


def test_two_vertices_are_adjacent():
    vs = enumerate_mecs(2)
    edge, cert = is_edge(vs.imsets[0], vs.imsets[1], vs)
    assert edge and verify_certificate(cert, vs.imsets[0], vs.imsets[1], vs)


def test_chain_collider_adjacent(vs3):
    edge, cert = is_edge(characteristic_imset(CHAIN), characteristic_imset(COLLIDER), vs3)
    assert edge
    assert verify_certificate(cert, characteristic_imset(CHAIN), characteristic_imset(COLLIDER), vs3)


def test_exact_and_float_routes_agree(vs3):
    for a, b in itertools.combinations(range(len(vs3)), 2):
        u, v = vs3.imsets[a], vs3.imsets[b]
        dec = decide_edge(u, v, vs3)
        assert abs(float(dec.delta) - float_delta(u, v, vs3)) < 1e-7


def test_midpoint_route_agrees_everywhere_at_three(vs3):
    for a, b in itertools.combinations(range(len(vs3)), 2):
        u, v = vs3.imsets[a], vs3.imsets[b]
        assert is_edge(u, v, vs3)[0] == midpoint_oracle(u, v, vs3)


def test_midpoint_route_agrees_on_random_pairs_at_four(vs4):
    rng = random.Random(7)
    for _ in range(60):
        a, b = rng.sample(range(len(vs4)), 2)
        u, v = vs4.imsets[a], vs4.imsets[b]
        assert is_edge(u, v, vs4)[0] == midpoint_oracle(u, v, vs4)


def test_certificates_and_combinations_verify(vs4):
    rng = random.Random(11)
    seen = {True: 0, False: 0}
    for _ in range(80):
        a, b = rng.sample(range(len(vs4)), 2)
        u, v = vs4.imsets[a], vs4.imsets[b]
        dec = decide_edge(u, v, vs4)
        seen[dec.edge] += 1
        if dec.edge:
            assert dec.delta > 0
            assert verify_certificate(dec.certificate, u, v, vs4)
            back = EdgeCertificate.from_json(dec.certificate.to_json())
            assert back == dec.certificate
        else:
            assert dec.delta == 0
            assert verify_non_edge(dec.combination, u, v, vs4)
    assert seen[True] and seen[False]


def test_witness_implies_non_edge(vs3):
    found = 0
    for a, b in itertools.combinations(range(len(vs3)), 2):
        u, v = vs3.imsets[a], vs3.imsets[b]
        w = parallelogram_witness(u, v, vs3)
        if w is not None:
            found += 1
            x, y = w
            assert all(p + q == r + s for p, q, r, s in zip(x.dense(), y.dense(), u.dense(), v.dense()))
            assert not is_edge(u, v, vs3)[0]
    assert found


def test_zero_functional_rejected(vs3):
    u, v = vs3.imsets[0], vs3.imsets[1]
    zero = EdgeCertificate(3, (Fraction(0),) * 4, Fraction(0), Fraction(1))
    assert not verify_certificate(zero, u, v, vs3)


def test_not_a_vertex(vs3):
    with pytest.raises(NotAVertex):
        is_edge(vs3.imsets[0], Imset(3, frozenset({0b111})), vs3)


def test_realizing_set_examples(vs3, vs4):
    cert = realizing_set_certificate(Dag.empty(3), 2, {1, 3})
    assert verify_certificate(cert, characteristic_imset(Dag.empty(3)), characteristic_imset(COLLIDER), vs3)
    d = Dag(4, [(1, 2)])
    h = Dag(4, [(1, 2), (2, 4), (3, 4)])
    cert = realizing_set_certificate(d, 4, {2, 3})
    assert verify_certificate(cert, characteristic_imset(d), characteristic_imset(h), vs4)


def test_single_parent_weights_do_not_separate(vs3):
    # with one new parent S* u {i} is itself a new 2-set, so the weight cases
    # overlap; the pair is still an edge (single-edge addition)
    d, h = Dag.empty(3), Dag(3, [(2, 1)])
    cert = realizing_set_certificate(d, 1, {2})
    cd, ch = characteristic_imset(d), characteristic_imset(h)
    assert evaluate(cert.w, ch) < evaluate(cert.w, cd)
    assert not verify_certificate(cert, cd, ch, vs3)
    assert is_edge(cd, ch, vs3)[0]


def test_realizing_set_weights_tie_when_i_has_parents(vs4, oracle4):
    # the explicit weights reach their maximum at d and h but also at
    # 4->3, 1->4, 2->4, which differs only on weight-zero 3-sets
    d = Dag(4, [(3, 4)])
    h = Dag(4, [(3, 4), (1, 4), (2, 4)])
    cert = realizing_set_certificate(d, 4, {1, 2})
    cd, ch = characteristic_imset(d), characteristic_imset(h)
    assert not verify_certificate(cert, cd, ch, vs4)
    third = characteristic_imset(Dag(4, [(4, 3), (1, 4), (2, 4)]))
    values = [evaluate(cert.w, im) for im in vs4.imsets]
    assert max(values) == cert.value == evaluate(cert.w, third) == evaluate(cert.w, ch)
    assert oracle4(cd, ch)


def test_realizing_set_preconditions():
    with pytest.raises(PreconditionViolated):
        realizing_set_certificate(Dag(3, [(1, 3)]), 2, {1, 3})
    with pytest.raises(PreconditionViolated):
        realizing_set_certificate(Dag(3, [(2, 1)]), 2, {1, 3})
    with pytest.raises(PreconditionViolated):
        realizing_set_certificate(Dag(3, [(2, 3), (3, 1)]), 2, {1})
    with pytest.raises(PreconditionViolated):
        realizing_set_certificate(Dag.empty(3), 2, set())


def test_non_edge_witness_example(vs4):
    d = Dag.empty(4)
    h, g1, g2 = non_edge_witness(d, [(1, {2}), (3, {4})])
    assert h.edges == {(2, 1), (4, 3)}
    cd, ch = characteristic_imset(d), characteristic_imset(h)
    assert not is_edge(cd, ch, vs4)[0]
    assert set(parallelogram_witness(cd, ch, vs4)) == {characteristic_imset(g1), characteristic_imset(g2)}
    with pytest.raises(PreconditionViolated):
        non_edge_witness(d, [(1, {2})])
    with pytest.raises(PreconditionViolated):
        non_edge_witness(Dag(4, [(2, 1)]), [(1, {2}), (3, {4})])


def test_six_node_star_decomposes():
    # empty graph vs 1->6<-2 with 6 -> 3, 4, 5
    d = Dag.empty(6)
    h, g1, g2 = non_edge_witness(d, [(6, {1, 2}), (3, {6}), (4, {6}), (5, {6})])
    assert h.edges == {(1, 6), (2, 6), (6, 3), (6, 4), (6, 5)}
    assert g1.edges == {(1, 6), (2, 6)}


def test_small_diameters(vs3):
    assert diameter(edge_graph(enumerate_mecs(2)))[0] == 1
    eg = edge_graph(vs3)
    assert len(vs3) == 11 and eg.num_edges == 33
    assert diameter(eg)[0] == 2
    empty = characteristic_imset(Dag.empty(3))
    full = characteristic_imset(Dag(3, [(1, 2), (1, 3), (2, 3)]))
    assert distance(eg, empty, full) == 2
    assert distance(eg, empty, empty) == 0
    assert all(a not in eg.adjacency[a] for a in range(len(vs3)))
    assert all(a in eg.adjacency[b] for a in range(len(vs3)) for b in eg.adjacency[a])


def test_edge_graph_independent_of_jobs(vs3):
    assert edge_graph(vs3, jobs=1).adjacency == edge_graph(vs3, jobs=2).adjacency


def test_star_face_is_simplex():
    vs = enumerate_mecs_skeleton(star_graph(3))
    eg = edge_graph(vs)
    assert eg.num_edges == len(vs) * (len(vs) - 1) // 2
    assert affine_dimension(vs) == len(vs) - 1


def test_affine_dimension(vs3, vs4):
    assert affine_dimension(enumerate_mecs(2)) == 1
    assert affine_dimension(vs3) == 4
    assert affine_dimension(vs4) == 11


def test_oracle_memo(vs3):
    oracle = EdgeOracle(vs3)
    u, v = vs3.imsets[0], vs3.imsets[5]
    first = oracle(u, v)
    assert oracle(v, u) == first and len(oracle.known) == 1
    with pytest.raises(PreconditionViolated):
        oracle(u, u)
