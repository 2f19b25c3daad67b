"""Command-line interface: ``cimpoly <command> ...``.

Every command writes one JSON document to stdout (or ``--out FILE``).
Exit codes: 0 success, 2 precondition errors, 3 guard limits.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import cache
from .enumeration import MAX_FULL_NODES, MAX_SKELETON_EDGES, labeled_trees
from .errors import CimError, LimitExceeded, PreconditionError, PreconditionViolated, SkeletonMismatch
from .geometry import MAX_PAIRWISE, EdgeOracle, decide_edge, diameter, evaluate, parallelogram_witness
from .graphs import Dag, UGraph, parse_graph, skeleton
from .imset import characteristic_imset, coordinates, dense_csv
from .moves import (
    ADD,
    FULL,
    PARENT_SET,
    REMOVE,
    REVERSE,
    SINK,
    SKELETON,
    cim_path,
    greedy_walk,
    skeleton_path,
    test_sink_conjecture,
    tree_path,
)
from .trees import is_essential_flip, subtree_condition_classes


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _read_graph(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PreconditionViolated(f"cannot read {path}: {exc.strerror}") from exc
    return parse_graph(text)


def _read_dag(path: str) -> Dag:
    g = _read_graph(path)
    if isinstance(g, UGraph):
        raise PreconditionViolated(f"{path}: expected directed edges (i -> j)")
    return g


def _read_skeleton(path: str) -> UGraph:
    g = _read_graph(path)
    return skeleton(g) if isinstance(g, Dag) else g


def _warn(msg: str) -> None:
    print(msg, file=sys.stderr)


def _estimate(args, n: int, face: UGraph | None) -> None:
    """Print rough work estimates when guards are overridden."""
    if not args.unsafe_large:
        return
    if face is None:
        work = 3 ** (n * (n - 1) // 2)
        _warn(f"--unsafe-large: enumerating up to {work} edge patterns on {n} nodes")
    else:
        _warn(f"--unsafe-large: enumerating {2 ** face.num_edges} orientations of {face.num_edges} edges")


def _vertex_set(args, n: int, face: UGraph | None):
    if not args.unsafe_large:
        if face is None and n > MAX_FULL_NODES:
            raise LimitExceeded(f"n={n} exceeds {MAX_FULL_NODES}; rerun with --unsafe-large")
        if face is not None and face.num_edges > MAX_SKELETON_EDGES:
            raise LimitExceeded(f"{face.num_edges} edges exceed {MAX_SKELETON_EDGES}; rerun with --unsafe-large")
    _estimate(args, n, face)
    return cache.load_vertex_set(n, face, args.unsafe_large, cache.cache_dir(args.cache))


def _edge_graph(args, vs):
    N = len(vs)
    if N > MAX_PAIRWISE:
        if not args.unsafe_large:
            raise LimitExceeded(f"{N} vertices exceed the pairwise guard of {MAX_PAIRWISE}; rerun with --unsafe-large")
        _warn(f"--unsafe-large: {N * (N - 1) // 2} adjacency LPs")
    return cache.load_edge_graph(vs, args.unsafe_large, args.jobs, cache.cache_dir(args.cache))


def _scope(args) -> tuple[int, UGraph | None]:
    if args.skeleton:
        g = _read_skeleton(args.skeleton)
        return g.n, g
    if args.nodes is None:
        raise PreconditionViolated("give --nodes N or --skeleton FILE")
    return args.nodes, None


# -- commands ---------------------------------------------------------------


def cmd_enumerate(args) -> dict:
    n, face = _scope(args)
    vs = _vertex_set(args, n, face)
    if args.csv:
        Path(args.csv).write_text(dense_csv(vs.imsets, n))
    return cache.vertex_set_to_json(vs)


def cmd_imset(args) -> dict:
    d = _read_dag(args.dag)
    im = characteristic_imset(d)
    out = im.to_json()
    if args.dense:
        out["dense"] = list(im.dense())
    return out


def cmd_edge_check(args) -> dict:
    a, b = _read_dag(args.source), _read_dag(args.target)
    if a.n != b.n:
        raise PreconditionViolated("DAGs on different node counts")
    face = None
    if args.face:
        face = skeleton(a)
        if skeleton(b) != face:
            raise SkeletonMismatch("--face needs a shared skeleton")
    vs = _vertex_set(args, a.n, face)
    u, v = characteristic_imset(a), characteristic_imset(b)
    out: dict = {"n": a.n, "face": None if face is None else [list(e) for e in face.sorted_edges()]}
    if u == v:
        raise PreconditionViolated("the DAGs are Markov equivalent (same vertex)")
    t = time.perf_counter()
    dec = decide_edge(u, v, vs)
    _warn(f"edge-check: {time.perf_counter() - t:.4f}s, {dec.pivots} pivots")
    out["edge"] = dec.edge
    out["delta"] = _frac(dec.delta)
    out["certificate"] = dec.certificate.to_json() if dec.certificate else None
    witness = None
    if not dec.edge:
        pair = parallelogram_witness(u, v, vs)
        combo = [
            {"imset": vs.imsets[k].to_json()["ones"], "weight": _frac(a_)}
            for k, a_ in sorted(dec.combination.items())
            if k >= 0
        ]
        witness = {
            "parallelogram": None if pair is None else [x.to_json()["ones"] for x in pair],
            "combination": combo,
            "direction_weight": _frac(dec.combination.get(-1, Fraction(0))),
        }
    out["witness"] = witness
    return out


def cmd_diameter(args) -> dict:
    n, face = _scope(args)
    vs = _vertex_set(args, n, face)
    eg = _edge_graph(args, vs)
    dm, (i, j) = diameter(eg)
    return {
        "n": n,
        "face": None if face is None else [list(e) for e in face.sorted_edges()],
        "vertices": len(vs),
        "edges": eg.num_edges,
        "diameter": dm,
        "witness": [vs.imsets[i].to_json()["ones"], vs.imsets[j].to_json()["ones"]],
    }


def cmd_walk(args) -> dict:
    a, b = _read_dag(args.source), _read_dag(args.target)
    build = {"reversal": skeleton_path, "parentset": cim_path, "tree": tree_path}[args.strategy]
    path = build(a, b)
    out = path.to_json()
    if args.validate:
        face = None if args.strategy == "parentset" else skeleton(a)
        vs = _vertex_set(args, a.n, face)
        oracle = EdgeOracle(vs)
        out["validation"] = path.validate(oracle)
    return out


_KINDS = {"reverse": REVERSE, "add": ADD, "remove": REMOVE, "parent-set": PARENT_SET, "sink": SINK}


def cmd_greedy(args) -> dict:
    start = _read_dag(args.start)
    raw = json.loads(Path(args.weights).read_text())
    try:
        w = [Fraction(x) for x in raw]
    except (TypeError, ValueError) as exc:
        raise PreconditionViolated(f"weights must be a JSON list of rationals: {exc}") from exc
    if len(w) != len(coordinates(start.n)):
        raise PreconditionViolated(f"expected {len(coordinates(start.n))} weights, got {len(w)}")
    kinds = [_KINDS[k] for k in args.moves.split(",")]
    face = SKELETON if args.face == "skeleton" else FULL
    oracle_graph = None
    if args.oracle:
        fg = skeleton(start) if face == SKELETON else None
        oracle_graph = _edge_graph(args, _vertex_set(args, start.n, fg))
    path = greedy_walk(start, w, kinds, face, oracle_graph)
    out = path.to_json()
    out["values"] = [_frac(evaluate(w, im)) for im in path.imsets]
    return out


def cmd_tree_check(args) -> dict:
    a, b = _read_dag(args.source), _read_dag(args.target)
    flip = is_essential_flip(a, b)
    table = subtree_condition_classes(a, b)
    return {"essential_flip": flip.to_json(), "subtree_condition": table.to_json()}


def cmd_conjecture(args) -> dict:
    if args.skeleton:
        scope = _read_skeleton(args.skeleton)
        if scope.num_edges > MAX_SKELETON_EDGES and not args.unsafe_large:
            raise LimitExceeded("skeleton too large; rerun with --unsafe-large")
    elif args.trees:
        scope = labeled_trees(args.trees)
    elif args.nodes is not None:
        if args.nodes > 4 and not args.unsafe_large:
            raise LimitExceeded("the all-skeleton sweep is guarded at n <= 4; rerun with --unsafe-large")
        scope = args.nodes
    else:
        raise PreconditionViolated("give --nodes N, --trees N or --skeleton FILE")
    return test_sink_conjecture(scope).to_json()


def cmd_reproduce(args) -> dict:
    from .reproduce import CHECKS, Context, run

    if args.all or not args.criteria:
        numbers = sorted(CHECKS)
    else:
        numbers = sorted({int(x) for x in args.criteria.split(",")})
        bad = [k for k in numbers if k not in CHECKS]
        if bad:
            raise PreconditionViolated(f"unknown criteria {bad}")
    results = run(numbers, Context(args.jobs), on_result=lambda r: _warn(r.line()))
    table = [r.to_json() for r in results]
    for row in table:
        row.pop("seconds")  # keep stdout reproducible
    return {"passed": sum(r.passed for r in results), "total": len(results), "criteria": table}


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for pairwise LPs")
    common.add_argument("--cache", help=f"cache directory (default: ${cache.ENV_VAR})")
    common.add_argument("--unsafe-large", action="store_true", help="lift size guards")

    p = argparse.ArgumentParser(prog="cimpoly", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def scoped(name, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--nodes", type=int)
        g.add_argument("--skeleton", help="graph file; directed edges are read as undirected")
        return s

    s = scoped("enumerate", "vertex set of CIM_n or CIM_G")
    s.add_argument("--csv", help="also write the dense imset matrix as CSV")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("imset", parents=[common], help="characteristic imset of a DAG")
    s.add_argument("--dag", required=True)
    s.add_argument("--dense", action="store_true")
    s.set_defaults(func=cmd_imset)

    s = sub.add_parser("edge-check", parents=[common], help="exact adjacency of two DAGs' imsets")
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", dest="target", required=True)
    s.add_argument("--face", action="store_true", help="test inside CIM_G of the shared skeleton")
    s.set_defaults(func=cmd_edge_check)

    s = scoped("diameter", "diameter of the vertex-edge graph")
    s.set_defaults(func=cmd_diameter)

    s = sub.add_parser("walk", parents=[common], help="construct a path between two DAGs")
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", dest="target", required=True)
    s.add_argument("--strategy", choices=["reversal", "parentset", "tree"], required=True)
    s.add_argument("--no-validate", dest="validate", action="store_false", help="skip per-step LP checks")
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("greedy", parents=[common], help="greedy improving walk for a linear objective")
    s.add_argument("--start", required=True)
    s.add_argument("--weights", required=True, help='JSON list of rationals, e.g. ["1/2", "-3"]')
    s.add_argument("--moves", default="reverse,add,parent-set", help="comma list of " + ",".join(_KINDS))
    s.add_argument("--face", choices=["full", "skeleton"], default="full")
    s.add_argument("--oracle", action="store_true", help="use every polytope neighbour (diagnostic)")
    s.set_defaults(func=cmd_greedy)

    s = sub.add_parser("tree-check", parents=[common], help="essential flip and subtree table for tree DAGs")
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", dest="target", required=True)
    s.set_defaults(func=cmd_tree_check)

    s = sub.add_parser("conjecture", parents=[common], help="sink-move conjecture sweep")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--nodes", type=int, help="every skeleton on N nodes")
    g.add_argument("--trees", type=int, help="every labeled tree on N nodes")
    g.add_argument("--skeleton")
    s.set_defaults(func=cmd_conjecture)

    s = sub.add_parser("reproduce", parents=[common], help="run the numeric checks and print a table")
    s.add_argument("--all", action="store_true")
    s.add_argument("--criteria", help="comma list of check numbers")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    if args.command == "greedy" and any(k not in _KINDS for k in args.moves.split(",")):
        parser.error(f"--moves takes a comma list of {', '.join(_KINDS)}")
    try:
        result = args.func(args)
    except LimitExceeded as exc:
        _warn(f"limit: {exc}")
        return 3
    except PreconditionError as exc:
        _warn(f"error: {exc}")
        return 2
    except CimError as exc:
        _warn(f"error: {exc}")
        return 2
    text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "reproduce" and result["passed"] != result["total"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
