"""Numeric checks for every headline claim, runnable as one table.

Each ``check_*`` function returns a :class:`CheckResult`; ``run`` evaluates
a selection and shares vertex sets and adjacency memos between them.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .enumeration import (
    all_graphs,
    enumerate_dags,
    enumerate_mecs,
    enumerate_mecs_skeleton,
    enumerate_orientations,
    labeled_trees,
    path_graph,
    star_graph,
    unlabeled_trees,
)
from .errors import CimError
from .geometry import (
    EdgeOracle,
    affine_dimension,
    diameter,
    evaluate,
    non_edge_witness,
    realizing_set_certificate,
    realizing_set_target,
    verify_certificate,
)
from .graphs import UGraph, _acyclic_masks, add_edge, bit, reverse_edge, skeleton, v_structures
from .imset import characteristic_imset, coordinates, imsets_equal_23
from .moves import cim_path, greedy_walk, skeleton_path, test_sink_conjecture, tree_path
from .trees import internal_nodes, is_essential_flip, subtree_condition_classes, tree_bounds


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


class Context:
    """Shared vertex sets and adjacency memos."""

    def __init__(self, jobs: int = 1):
        self.jobs = jobs
        self._full: dict[int, tuple] = {}
        self._faces: dict[UGraph, tuple] = {}

    def full(self, n: int):
        if n not in self._full:
            vs = enumerate_mecs(n)
            self._full[n] = (vs, EdgeOracle(vs))
        return self._full[n]

    def face(self, g: UGraph):
        if g not in self._faces:
            vs = enumerate_mecs_skeleton(g)
            self._faces[g] = (vs, EdgeOracle(vs))
        return self._faces[g]


def _trees_upto6() -> list[UGraph]:
    # every labeled tree up to five nodes; isomorphism classes at six
    out: list[UGraph] = []
    for n in range(2, 6):
        out.extend(labeled_trees(n))
    out.extend(unlabeled_trees(6))
    return out


def check_full_diameter(ctx: Context) -> CheckResult:
    found = {}
    for n in (2, 3, 4):
        vs, oracle = ctx.full(n)
        eg = oracle.graph(jobs=ctx.jobs)
        found[n] = diameter(eg)[0]
    return CheckResult(1, "diam(CIM_n) = n - 1 for n = 2, 3, 4", all(found[n] == n - 1 for n in found), {"diameters": found})


def check_counts(ctx: Context) -> CheckResult:
    mecs = {n: len(ctx.full(n)[0]) for n in (2, 3, 4)}
    dags = {n: sum(m.member_count for m in ctx.full(n)[0].mecs) for n in (2, 3, 4)}
    ok = mecs == {2: 2, 3: 11, 4: 185} and dags == {2: 3, 3: 25, 4: 543}
    return CheckResult(2, "MEC counts 2/11/185 and DAG counts 3/25/543", ok, {"mecs": mecs, "dags": dags})


def check_affine_dimension(ctx: Context) -> CheckResult:
    dims = {n: affine_dimension(ctx.full(n)[0]) for n in (2, 3, 4)}
    ok = all(dims[n] == 2**n - n - 1 for n in dims)
    return CheckResult(3, "affine dimension 2^n - n - 1 for n = 2, 3, 4", ok, {"dimensions": dims})


def check_small_sets_determine(ctx: Context) -> CheckResult:
    ims = [characteristic_imset(d) for d in enumerate_dags(4)]
    exceptions = 0
    for a in ims:
        for b in ims:
            if imsets_equal_23(a, b) != (a == b):
                exceptions += 1
    return CheckResult(4, "{2,3}-set equality iff full equality (543 x 543, n = 4)", exceptions == 0,
                       {"pairs": len(ims) ** 2, "exceptions": exceptions})


def check_grouping(ctx: Context) -> CheckResult:
    exceptions = 0
    for n in range(1, 5):
        by_imset: dict = {}
        by_graph: dict = {}
        for k, d in enumerate(enumerate_dags(n)):
            by_imset.setdefault(characteristic_imset(d), set()).add(k)
            by_graph.setdefault((skeleton(d), v_structures(d)), set()).add(k)
        a = sorted(map(sorted, by_imset.values()))
        b = sorted(map(sorted, by_graph.values()))
        exceptions += a != b
    return CheckResult(5, "imset grouping = (skeleton, v-structures) grouping, n <= 4", exceptions == 0,
                       {"exceptions": exceptions})


def check_single_edge_moves(ctx: Context) -> CheckResult:
    reversals = additions = failures = 0
    for n in range(2, 5):
        for g in all_graphs(n):
            if not g.num_edges:
                continue
            vs, oracle = ctx.face(g)
            for d in enumerate_orientations(g):
                cd = characteristic_imset(d)
                for i, j in d.sorted_edges():
                    try:
                        e = reverse_edge(d, i, j)
                    except CimError:
                        continue
                    ce = characteristic_imset(e)
                    if ce == cd:
                        continue
                    reversals += 1
                    failures += not oracle(cd, ce)
        vs, oracle = ctx.full(n)
        for d in enumerate_dags(n):
            cd = characteristic_imset(d)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i == j or d.neighbor_mask(i) & bit(j):
                        continue
                    try:
                        e = add_edge(d, i, j)
                    except CimError:
                        continue
                    additions += 1
                    failures += not oracle(cd, characteristic_imset(e))
    return CheckResult(6, "single-edge reversals and additions are edges, n <= 4", failures == 0,
                       {"reversals": reversals, "additions": additions, "failures": failures})


def check_realizing_sets(ctx: Context) -> CheckResult:
    vs, oracle = ctx.full(4)
    instances = failures = 0
    strict = weak = lp_edges = 0
    failing_with_parents = 0
    for d in enumerate_dags(4):
        for i in range(1, 5):
            rest = [j for j in range(1, 5) if j != i]
            for size in (2, 3):
                for S in itertools.combinations(rest, size):
                    try:
                        h = realizing_set_target(d, i, S)
                    except CimError:
                        continue
                    instances += 1
                    cert = realizing_set_certificate(d, i, S)
                    cd, ch = characteristic_imset(d), characteristic_imset(h)
                    ok_cert = verify_certificate(cert, cd, ch, vs)
                    ok_lp = oracle(cd, ch)
                    strict += ok_cert
                    lp_edges += ok_lp
                    # does w at least attain its maximum at both endpoints?
                    weak += max(evaluate(cert.w, im) for im in vs.imsets) == cert.value
                    if not ok_cert and d.parents[i - 1]:
                        failing_with_parents += 1
                    failures += not (ok_cert and ok_lp)
    detail = {
        "instances": instances,
        "failures": failures,
        "explicit_w_strict": strict,
        "explicit_w_maximal_but_tied": weak - strict,
        "lp_edges": lp_edges,
        "failures_where_i_has_parents": failing_with_parents,
    }
    return CheckResult(7, "realizing-set certificates verify and match the LP, n = 4", failures == 0 and instances > 0, detail)


def multi_sink_instances(n: int, limit: int | None = None, seed: int = 0):
    """Two- and three-block multi-sink additions.

    Without ``limit`` every combination is yielded, including ones that
    would close a cycle. With ``limit`` only acyclic instances are sampled.
    """
    rng = random.Random(seed)
    dags = list(enumerate_dags(n))
    nodes = range(1, n + 1)

    def blocks_for(d, i):
        free = [j for j in nodes if not (d.neighbor_mask(i) | bit(i)) & bit(j)]
        return [frozenset(S) for r in range(1, len(free) + 1) for S in itertools.combinations(free, r)]

    def gen(d):
        for k in (2, 3):
            for sinks in itertools.combinations(nodes, k):
                for choice in itertools.product(*(blocks_for(d, i) for i in sinks)):
                    if all(choice):
                        yield d, list(zip(sinks, choice))

    if limit is None:
        for d in dags:
            yield from gen(d)
        return
    produced = 0
    while produced < limit:
        d = rng.choice(dags)
        options = list(gen(d))
        if not options:
            continue
        pick = rng.choice(options)
        parents = list(d.parents)
        for i, S in pick[1]:
            for s in S:
                parents[i - 1] |= bit(s)
        if not _acyclic_masks(n, tuple(parents)):
            continue
        yield pick
        produced += 1


def check_multi_sink(ctx: Context) -> CheckResult:
    counts = {4: 0, 5: 0}
    failures = skipped = 0
    for n, limit in ((4, None), (5, 2000)):
        oracle = ctx.full(4)[1] if n == 4 else None
        for d, sinks in multi_sink_instances(n, limit):
            try:
                h, g1, g2 = non_edge_witness(d, sinks)
            except ArithmeticError:
                counts[n] += 1
                failures += 1
                continue
            except CimError:
                skipped += 1
                continue
            counts[n] += 1
            if oracle is not None and oracle(characteristic_imset(d), characteristic_imset(h)):
                failures += 1
    return CheckResult(8, "multi-sink additions: parallelogram identity and non-edge", failures == 0,
                       {"instances": counts, "skipped_cyclic": skipped, "failures": failures})


def check_tree_characterization(ctx: Context) -> CheckResult:
    pairs = disagreements = 0
    for g in _trees_upto6():
        vs, oracle = ctx.face(g)
        reps = [m.representative for m in vs.mecs]
        for a, b in itertools.combinations(range(len(vs)), 2):
            pairs += 1
            e = oracle(vs.imsets[a], vs.imsets[b])
            f = is_essential_flip(reps[a], reps[b]).verdict
            s = subtree_condition_classes(reps[a], reps[b]).verdict
            disagreements += not (e == f == s)
    paths = {}
    for n in range(2, 8):
        vs, oracle = ctx.face(path_graph(n))
        paths[n] = diameter(oracle.graph())[0]
    stars = {}
    for k in range(1, 6):
        vs, oracle = ctx.face(star_graph(k))
        stars[k] = diameter(oracle.graph())[0]
    # a single edge has one vertex; larger stars are simplices
    ok = (
        disagreements == 0
        and all(paths[n] == (n - 1) // 2 for n in paths)
        and all(stars[k] == (1 if k >= 2 else 0) for k in stars)
    )
    return CheckResult(9, "trees: subtree table = essential flip = LP edge; path and star diameters", ok,
                       {"pairs": pairs, "disagreements": disagreements, "path_diameters": paths, "star_diameters": stars})


def check_tree_bounds(ctx: Context) -> CheckResult:
    trees = violations = 0
    for g in _trees_upto6():
        vs, oracle = ctx.face(g)
        lo, hi = tree_bounds(g)
        dm = diameter(oracle.graph())[0]
        trees += 1
        violations += not lo <= dm <= hi
    return CheckResult(10, "floor(p/2) <= diam(CIM_G) <= m for trees, n <= 6", violations == 0,
                       {"trees": trees, "violations": violations})


def check_paths(ctx: Context) -> CheckResult:
    stats = {"skeleton_paths": 0, "cim_paths": 0, "tree_paths": 0, "invalid_steps": 0, "over_bound": 0}
    for n in range(2, 5):
        for g in all_graphs(n):
            vs, oracle = ctx.face(g)
            orients = list(enumerate_orientations(g))
            for a in orients:
                for b in orients:
                    p = skeleton_path(a, b)
                    stats["skeleton_paths"] += 1
                    stats["over_bound"] += len(p.steps) > g.num_edges
                    stats["invalid_steps"] += p.validate(oracle).count(False)
        vs, oracle = ctx.full(n)
        reps = [m.representative for m in vs.mecs]
        for a in reps:
            for b in reps:
                p = cim_path(a, b)
                stats["cim_paths"] += 1
                stats["over_bound"] += p.polytope_length > 2 * n - 2
                stats["invalid_steps"] += p.validate(oracle).count(False)
    for g in _trees_upto6():
        vs, oracle = ctx.face(g)
        m = len(internal_nodes(g))
        reps = [x.representative for x in vs.mecs]
        for a in reps:
            for b in reps:
                p = tree_path(a, b)
                stats["tree_paths"] += 1
                stats["over_bound"] += p.polytope_length > m
                for k, u, v in p.polytope_steps():
                    ok = oracle(u, v) and is_essential_flip(p.dags[k], p.dags[k + 1]).verdict
                    stats["invalid_steps"] += not ok
    ok = stats["invalid_steps"] == 0 and stats["over_bound"] == 0
    return CheckResult(11, "path constructions respect their bounds with valid steps", ok, stats)


def check_sink_conjecture(ctx: Context) -> CheckResult:
    reports = []
    for n in range(2, 5):
        reports.append(("all", n, test_sink_conjecture(n)))
    reports.append(("trees", 5, test_sink_conjecture(labeled_trees(5))))
    detail = {
        f"{scope}_n{n}": {
            "instances": r.instances,
            "confirmed": r.confirmed,
            "counterexamples": len(r.counterexamples),
            "tree_disagreements": len(r.tree_disagreements),
        }
        for scope, n, r in reports
    }
    # either outcome is reportable; a counterexample must come with a full dump
    ok = all(all({"skeleton", "dag", "node", "sunk"} <= set(c) for c in r.counterexamples) for _, _, r in reports)
    ok = ok and all(not r.tree_disagreements for _, _, r in reports)
    detail["counterexample_dumps"] = [c for _, _, r in reports for c in r.counterexamples]
    return CheckResult(12, "sink-move conjecture sweep (n <= 4, trees n = 5)", ok, detail)


def check_greedy(ctx: Context, trials: int = 100, seed: int = 2024) -> CheckResult:
    vs, oracle = ctx.full(3)
    eg = oracle.graph()
    rng = random.Random(seed)
    dim = len(coordinates(3))
    failures = 0
    for _ in range(trials):
        w = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(dim)]
        best = max(evaluate(w, im) for im in vs.imsets)
        start = vs.mecs[rng.randrange(len(vs))].representative
        p = greedy_walk(start, w, oracle_graph=eg)
        failures += evaluate(w, p.imsets[-1]) != best
    return CheckResult(13, "greedy edge walk reaches the optimum at n = 3", failures == 0,
                       {"trials": trials, "failures": failures})


CHECKS: dict[int, Callable[[Context], CheckResult]] = {
    1: check_full_diameter,
    2: check_counts,
    3: check_affine_dimension,
    4: check_small_sets_determine,
    5: check_grouping,
    6: check_single_edge_moves,
    7: check_realizing_sets,
    8: check_multi_sink,
    9: check_tree_characterization,
    10: check_tree_bounds,
    11: check_paths,
    12: check_sink_conjecture,
    13: check_greedy,
}


def run(numbers=None, ctx: Context | None = None, on_result=None) -> list[CheckResult]:
    ctx = ctx or Context()
    out = []
    for k in sorted(numbers or CHECKS):
        t = time.perf_counter()
        res = CHECKS[k](ctx)
        res.seconds = time.perf_counter() - t
        out.append(res)
        if on_result is not None:
            on_result(res)
    return out
