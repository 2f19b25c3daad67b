"""Polytope adjacency, certificates, non-edge witnesses and diameters.

Adjacency of two vertices ``u``, ``v`` of a vertex set is decided by the
exact LP

    maximize delta  s.t.  w.u = w.v = c,  w.x <= c - delta  (x != u, v),
                          -1 <= w_S <= 1,

which is solved through its dual (few rows, one column per vertex). The
optimal ``w`` comes back as the dual multipliers, so every positive verdict
carries a certificate and every negative verdict a nonnegative combination
proving that no separating functional exists.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import lp
from .enumeration import VertexSet
from .errors import Disconnected, LimitExceeded, NotAVertex, PreconditionViolated
from .graphs import Dag, _acyclic_masks, add_parents, bit, induced_edges, mask_of, nodes_of, topological_order
from .imset import Imset, characteristic_imset, coordinates

MAX_PAIRWISE = 400


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class EdgeCertificate:
    """Functional ``w`` with ``w.u = w.v = value`` and ``w.x <= value - margin`` elsewhere."""

    n: int
    w: tuple[Fraction, ...]
    value: Fraction
    margin: Fraction

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coordinates": ["{" + ",".join(map(str, nodes_of(m))) + "}" for m in coordinates(self.n)],
            "w": [_frac_str(q) for q in self.w],
            "value": _frac_str(self.value),
            "margin": _frac_str(self.margin),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EdgeCertificate":
        return cls(
            obj["n"],
            tuple(_parse_frac(s) for s in obj["w"]),
            _parse_frac(obj["value"]),
            _parse_frac(obj["margin"]),
        )


def evaluate(w: Sequence[Fraction], im: Imset) -> Fraction:
    """``w . c`` using the sparse ones of ``im``."""
    coords = coordinates(im.n)
    total = Fraction(0)
    for k, m in enumerate(coords):
        if m in im.ones and w[k]:
            total += w[k]
    return total


def verify_certificate(cert: EdgeCertificate, u: Imset, v: Imset, vs: VertexSet) -> bool:
    """Re-evaluate ``cert.w`` on every vertex of ``vs``."""
    if cert.margin <= 0 or u.n != cert.n or v.n != cert.n:
        return False
    if evaluate(cert.w, u) != cert.value or evaluate(cert.w, v) != cert.value:
        return False
    bound = cert.value - cert.margin
    for im in vs.imsets:
        if im == u or im == v:
            continue
        if evaluate(cert.w, im) > bound:
            return False
    return True


# -- the adjacency LP -------------------------------------------------------


def _dense_matrix(vs: VertexSet) -> np.ndarray:
    cached = vs.__dict__.get("_dense")
    if cached is None:
        cached = np.array([im.dense() for im in vs.imsets], dtype=np.int64).reshape(
            len(vs), len(coordinates(vs.n))
        )
        object.__setattr__(vs, "_dense", cached)
    return cached


def _varying(vs: VertexSet) -> np.ndarray:
    cached = vs.__dict__.get("_varying")
    if cached is None:
        X = _dense_matrix(vs)
        cached = np.flatnonzero(X.max(axis=0) != X.min(axis=0))
        object.__setattr__(vs, "_varying", cached)
    return cached


@dataclass(frozen=True)
class EdgeDecision:
    edge: bool
    delta: Fraction
    certificate: EdgeCertificate | None
    # on non-edges: weights on the other vertices (by vertex index) and on v - u
    combination: dict[int, Fraction] | None = None
    pivots: int = 0


def _vertex_index(im: Imset, vs: VertexSet) -> int:
    k = vs.index(im)
    if k < 0:
        raise NotAVertex(f"{im!r} is not a vertex of the given vertex set")
    return k


def decide_edge(u: Imset, v: Imset, vs: VertexSet) -> EdgeDecision:
    """Solve the adjacency LP for ``u``, ``v`` and return the full decision."""
    iu, iv = _vertex_index(u, vs), _vertex_index(v, vs)
    if iu == iv:
        raise PreconditionViolated("u and v must be distinct vertices")
    if len(vs) == 2:
        # nothing else to separate from
        w = (Fraction(0),) * len(coordinates(vs.n))
        return EdgeDecision(True, Fraction(1), EdgeCertificate(vs.n, w, Fraction(0), Fraction(1)))
    X = _dense_matrix(vs)
    cols = _varying(vs)
    d = len(cols)
    others = [k for k in range(len(vs)) if k != iu and k != iv]
    Xr = X[:, cols]
    G = (Xr[others] - Xr[iu]).T  # d x K
    h = (Xr[iv] - Xr[iu]).reshape(d, 1)
    K = len(others)
    eye = np.eye(d, dtype=np.int64)
    # columns: alpha (K) | beta+ beta- | gamma+ (d) | gamma- (d) | surplus
    top = np.hstack([G, h, -h, eye, -eye, np.zeros((d, 1), dtype=np.int64)])
    last = np.hstack(
        [np.ones((1, K), dtype=np.int64), np.zeros((1, 2 + 2 * d), dtype=np.int64), [[-1]]]
    )
    A = np.vstack([top, last])
    b = np.zeros(d + 1, dtype=np.int64)
    b[-1] = 1
    c = np.zeros(A.shape[1], dtype=np.int64)
    c[K + 2 : K + 2 + 2 * d] = -1
    res = lp.maximize(c, A, b)
    if res.status != lp.OPTIMAL:
        raise ArithmeticError(f"adjacency LP ended with status {res.status}")
    delta = -res.value
    if delta > 0:
        y = res.duals
        w = [Fraction(0)] * len(coordinates(vs.n))
        for k, col in enumerate(cols):
            w[col] = -y[k]
        value = evaluate(w, u)
        cert = EdgeCertificate(vs.n, tuple(w), value, delta)
        return EdgeDecision(True, delta, cert, pivots=res.pivots)
    combo = {others[k]: res.x[k] for k in range(K) if res.x[k]}
    combo[-1] = res.x[K] - res.x[K + 1]
    return EdgeDecision(False, Fraction(0), None, combo, res.pivots)


def is_edge(u: Imset, v: Imset, vs: VertexSet) -> tuple[bool, EdgeCertificate | None]:
    """Exact adjacency of ``u`` and ``v`` in conv(vs), with a certificate on success."""
    dec = decide_edge(u, v, vs)
    return dec.edge, dec.certificate


def verify_non_edge(combination: dict[int, Fraction], u: Imset, v: Imset, vs: VertexSet) -> bool:
    """Check ``sum_k a_k (x_k - u) + beta (v - u) = 0`` with ``a >= 0``, ``sum a >= 1``.

    Any functional constant on ``u``, ``v`` must then hit some other vertex at
    least as high, so no functional is maximized exactly at the pair.
    """
    X = _dense_matrix(vs)
    iu, iv = _vertex_index(u, vs), _vertex_index(v, vs)
    beta = combination.get(-1, Fraction(0))
    weights = {k: a for k, a in combination.items() if k >= 0}
    if any(a < 0 for a in weights.values()) or sum(weights.values()) < 1:
        return False
    if iu in weights or iv in weights:
        return False
    for col in range(X.shape[1]):
        total = beta * int(X[iv, col] - X[iu, col])
        for k, a in weights.items():
            total += a * int(X[k, col] - X[iu, col])
        if total != 0:
            return False
    return True


def midpoint_oracle(u: Imset, v: Imset, vs: VertexSet) -> bool:
    """Independent adjacency test: the midpoint of ``u``, ``v`` has no convex
    representation putting positive mass on any other vertex."""
    iu, iv = _vertex_index(u, vs), _vertex_index(v, vs)
    if iu == iv:
        raise PreconditionViolated("u and v must be distinct vertices")
    X = _dense_matrix(vs)
    cols = _varying(vs)
    Xr = X[:, cols]
    N = len(vs)
    A = np.vstack([Xr.T, np.ones((1, N), dtype=np.int64)])
    b = np.append(Xr[iu] + Xr[iv], 2)
    c = np.ones(N, dtype=np.int64)
    c[iu] = c[iv] = 0
    res = lp.maximize(c, A, b)
    if res.status != lp.OPTIMAL:
        raise ArithmeticError(f"midpoint LP ended with status {res.status}")
    return res.value == 0


# -- explicit certificates and witnesses -----------------------------------


def _check_realizing(d: Dag, i: int, S: frozenset[int]) -> Dag:
    if not S or i in S or any(not 1 <= j <= d.n for j in S | {i}):
        raise PreconditionViolated("need a nonempty S* inside [n] \\ {i}")
    if induced_edges(d, S):
        raise PreconditionViolated("d restricted to S* must have no edges")
    if d.neighbor_mask(i) & mask_of(S):
        raise PreconditionViolated("nodes of S* must be non-adjacent to i")
    try:
        return add_parents(d, i, sorted(S))
    except Exception as exc:
        raise PreconditionViolated(f"adding S* -> i is not acyclic: {exc}") from exc


def realizing_set_certificate(d: Dag, i: int, S: Iterable[int]) -> EdgeCertificate:
    """Explicit functional separating ``c_d`` and ``c_h`` (h = d plus S* -> i).

    Weights: n^2 where c_d is 1, -n^2 where c_h is 0, -1 on the new 2-sets,
    |S*| on S* u {i}, 0 elsewhere. Integral, so the margin claimed is 1.
    """
    S = frozenset(S)
    h = _check_realizing(d, i, S)
    n = d.n
    cg, ch = characteristic_imset(d), characteristic_imset(h)
    top = mask_of(S) | bit(i)
    w = []
    for m in coordinates(n):
        if m in cg.ones:
            w.append(Fraction(n * n))
        elif m not in ch.ones:
            w.append(Fraction(-n * n))
        elif bin(m).count("1") == 2:
            w.append(Fraction(-1))
        elif m == top:
            w.append(Fraction(len(S)))
        else:
            w.append(Fraction(0))
    w = tuple(w)
    return EdgeCertificate(n, w, evaluate(w, cg), Fraction(1))


def realizing_set_target(d: Dag, i: int, S: Iterable[int]) -> Dag:
    return _check_realizing(d, i, frozenset(S))


def parallelogram_witness(u: Imset, v: Imset, vs: VertexSet) -> tuple[Imset, Imset] | None:
    """Vertices ``a``, ``b`` (not ``u``, ``v``) with ``a + b = u + v``, if any."""
    iu, iv = _vertex_index(u, vs), _vertex_index(v, vs)
    X = _dense_matrix(vs)
    target = X[iu] + X[iv]
    lookup = {X[k].tobytes(): k for k in range(len(vs)) if k not in (iu, iv)}
    for a in sorted(lookup.values()):
        other = (target - X[a])
        if other.min() < 0 or other.max() > 1:
            continue
        b = lookup.get(other.tobytes())
        if b is not None and b != a:
            return vs.imsets[a], vs.imsets[b]
    return None


def non_edge_witness(
    d: Dag, sinks: Sequence[tuple[int, Iterable[int]]]
) -> tuple[Dag, Dag, Dag]:
    """Build ``(h, g1, g2)`` for a multi-sink parent addition.

    ``h`` adds every ``s -> i_t`` (s in S_t); ``g1`` only the first block,
    ``g2`` the remaining blocks. Raises unless c_d + c_h = c_g1 + c_g2.
    """
    blocks = [(i, frozenset(S)) for i, S in sinks]
    if len(blocks) < 2:
        raise PreconditionViolated("need at least two sink blocks (k >= 2)")
    for i, S in blocks:
        if not S:
            raise PreconditionViolated(f"empty parent block at {i}")
        cl = d.neighbor_mask(i) | bit(i)
        if cl & mask_of(S):
            raise PreconditionViolated(f"S_t meets the closure of {i}")

    def build(chosen):
        p = list(d.parents)
        for i, S in chosen:
            p[i - 1] |= mask_of(S)
        p = tuple(p)
        if not _acyclic_masks(d.n, p):
            raise PreconditionViolated("adding the sink blocks creates a cycle")
        return Dag._from_parents(d.n, p)

    h = build(blocks)
    g1 = build(blocks[:1])
    g2 = build(blocks[1:])
    lhs = _imset_sum(characteristic_imset(d), characteristic_imset(h))
    rhs = _imset_sum(characteristic_imset(g1), characteristic_imset(g2))
    if lhs != rhs:
        raise ArithmeticError("parallelogram identity failed")
    return h, g1, g2


def _imset_sum(a: Imset, b: Imset) -> dict[int, int]:
    out: dict[int, int] = {}
    for m in a.ones:
        out[m] = out.get(m, 0) + 1
    for m in b.ones:
        out[m] = out.get(m, 0) + 1
    return out


# -- vertex-edge graph ------------------------------------------------------


@dataclass(frozen=True)
class EdgeGraph:
    vertex_set: VertexSet
    adjacency: tuple[frozenset[int], ...]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    @property
    def num_edges(self) -> int:
        return sum(len(s) for s in self.adjacency) // 2

    def edge_list(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(len(self.adjacency)) for b in sorted(self.adjacency[a]) if a < b]


def _edge_block(args):
    vs, pairs = args
    ims = vs.imsets
    return [decide_edge(ims[a], ims[b], vs).edge for a, b in pairs]


def edge_graph(
    vs: VertexSet, unsafe: bool = False, jobs: int = 1, pairs_done: dict | None = None
) -> EdgeGraph:
    """Adjacency via the exact LP for every vertex pair.

    ``pairs_done`` maps ``(a, b)`` (a < b) to a known verdict and is filled in.
    """
    N = len(vs)
    if N > MAX_PAIRWISE and not unsafe:
        raise LimitExceeded(f"{N} vertices exceed the pairwise guard of {MAX_PAIRWISE}")
    known = pairs_done if pairs_done is not None else {}
    todo = [(a, b) for a in range(N) for b in range(a + 1, N) if (a, b) not in known]
    if jobs > 1 and len(todo) > 64:
        size = max(1, len(todo) // (jobs * 8))
        blocks = [todo[k : k + size] for k in range(0, len(todo), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_edge_block, [(vs, blk) for blk in blocks]))
        for blk, res in zip(blocks, results):
            known.update(zip(blk, res))
    else:
        known.update(zip(todo, _edge_block((vs, todo))))
    adj = [set() for _ in range(N)]
    for (a, b), e in known.items():
        if e:
            adj[a].add(b)
            adj[b].add(a)
    return EdgeGraph(vs, tuple(frozenset(s) for s in adj))


def _bfs(eg: EdgeGraph, src: int) -> list[int]:
    dist = [-1] * len(eg.adjacency)
    dist[src] = 0
    q = deque([src])
    while q:
        a = q.popleft()
        for b in sorted(eg.adjacency[a]):
            if dist[b] < 0:
                dist[b] = dist[a] + 1
                q.append(b)
    return dist


def distance(eg: EdgeGraph, u: Imset, v: Imset) -> int:
    iu, iv = _vertex_index(u, eg.vertex_set), _vertex_index(v, eg.vertex_set)
    d = _bfs(eg, iu)[iv]
    if d < 0:
        raise Disconnected("vertices lie in different components")
    return d


def diameter(eg: EdgeGraph) -> tuple[int, tuple[int, int]]:
    """Largest BFS distance and the first vertex pair realizing it."""
    best, pair = 0, (0, 0)
    for a in range(len(eg.adjacency)):
        dist = _bfs(eg, a)
        if min(dist) < 0:
            raise Disconnected("vertex-edge graph is disconnected")
        for b, x in enumerate(dist):
            if x > best:
                best, pair = x, (a, b)
    return best, pair


def affine_dimension(vs: VertexSet) -> int:
    X = _dense_matrix(vs)
    if len(vs) <= 1:
        return 0
    diffs = (X[1:] - X[0]).tolist()
    return lp.rank(diffs)


def topological_parent_blocks(d: Dag) -> list[tuple[int, frozenset[int]]]:
    """``(v_k, pa(v_k))`` in topological order, empty parent sets skipped."""
    return [(v, frozenset(nodes_of(d.parents[v - 1]))) for v in topological_order(d) if d.parents[v - 1]]


class EdgeOracle:
    """Memoized exact adjacency over one vertex set."""

    def __init__(self, vs: VertexSet, known: dict | None = None):
        self.vs = vs
        self.known: dict[tuple[int, int], bool] = known if known is not None else {}

    def index(self, im: Imset) -> int:
        return _vertex_index(im, self.vs)

    def __call__(self, u: Imset, v: Imset) -> bool:
        a, b = sorted((self.index(u), self.index(v)))
        if a == b:
            raise PreconditionViolated("u and v must be distinct vertices")
        hit = self.known.get((a, b))
        if hit is None:
            ims = self.vs.imsets
            hit = self.known[(a, b)] = decide_edge(ims[a], ims[b], self.vs).edge
        return hit

    def graph(self, unsafe: bool = False, jobs: int = 1) -> EdgeGraph:
        return edge_graph(self.vs, unsafe=unsafe, jobs=jobs, pairs_done=self.known)
