"""Characteristic imsets.

An imset on ``n`` nodes is stored as the frozenset of subset bitmasks with
value 1. Coordinates are all masks with popcount >= 2, ordered by mask value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import NotRealizable, SizeMismatch
from .graphs import Dag, UGraph, bit, iter_subsets, mask_of, nodes_of, skeleton, v_structures


@lru_cache(maxsize=None)
def coordinates(n: int) -> tuple[int, ...]:
    """Canonical coordinate masks for ``n`` nodes."""
    return tuple(m for m in range(1 << n) if bin(m).count("1") >= 2)


@lru_cache(maxsize=None)
def coordinate_index(n: int) -> dict[int, int]:
    return {m: k for k, m in enumerate(coordinates(n))}


def dimension(n: int) -> int:
    return (1 << n) - n - 1


@dataclass(frozen=True)
class Imset:
    n: int
    ones: frozenset[int]

    def __getitem__(self, subset) -> int:
        m = subset if isinstance(subset, int) else mask_of(subset)
        return 1 if m in self.ones else 0

    def dense(self) -> tuple[int, ...]:
        return tuple(1 if m in self.ones else 0 for m in coordinates(self.n))

    def ones_sorted(self) -> list[tuple[int, ...]]:
        """Ones as sorted node tuples, in canonical coordinate order."""
        return [nodes_of(m) for m in sorted(self.ones)]

    def to_json(self) -> dict:
        return {"n": self.n, "ones": [list(s) for s in self.ones_sorted()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Imset":
        n = obj["n"]
        ones = frozenset(mask_of(s) for s in obj["ones"])
        if any(bin(m).count("1") < 2 or m >> n for m in ones):
            raise NotRealizable("imset coordinate outside the index set")
        return cls(n, ones)

    @classmethod
    def from_dense(cls, n: int, values: Iterable[int]) -> "Imset":
        return cls(n, frozenset(m for m, v in zip(coordinates(n), values) if v))

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.ones_sorted())
        return f"Imset(n={self.n}, [{body}])"


def characteristic_imset(d: Dag) -> Imset:
    """c(S) = 1 iff some i in S has S \\ {i} among its parents."""
    ones = set()
    for i in range(1, d.n + 1):
        b = bit(i)
        for t in iter_subsets(d.parents[i - 1]):
            if t:
                ones.add(t | b)
    return Imset(d.n, frozenset(ones))


def _same_n(a, b) -> None:
    if a.n != b.n:
        raise SizeMismatch(f"node counts differ: {a.n} vs {b.n}")


def markov_equivalent(a: Dag, b: Dag) -> bool:
    _same_n(a, b)
    return skeleton(a) == skeleton(b) and v_structures(a) == v_structures(b)


def imsets_equal(a: Imset, b: Imset) -> bool:
    _same_n(a, b)
    return a.ones == b.ones


def imsets_equal_23(a: Imset, b: Imset) -> bool:
    """Equality restricted to coordinates of size 2 and 3."""
    _same_n(a, b)
    small = lambda ones: {m for m in ones if bin(m).count("1") <= 3}  # noqa: E731
    return small(a.ones) == small(b.ones)


def decode(im: Imset) -> tuple[UGraph, frozenset[tuple[int, int, int]]]:
    """Skeleton and v-structures of a DAG-derived imset."""
    n = im.n
    edges = [nodes_of(m) for m in im.ones if bin(m).count("1") == 2]
    g = UGraph(n, edges)
    vs = set()
    for m in im.ones:
        if bin(m).count("1") != 3:
            continue
        trio = nodes_of(m)
        colliders = []
        for j in trio:
            i, k = (x for x in trio if x != j)
            if not g.adjacent(i, k) and g.adjacent(i, j) and g.adjacent(j, k):
                colliders.append((i, j, k))
        if len(colliders) == 1:
            vs.add(colliders[0])
        elif not colliders and not _is_clique(g, trio):
            raise NotRealizable(f"3-set {trio} is 1 but induces no collider pattern")
        elif len(colliders) > 1:
            raise NotRealizable(f"3-set {trio} names no unique collider node")
    return g, frozenset(vs)


def _is_clique(g: UGraph, nodes) -> bool:
    return all(g.adjacent(a, b) for a in nodes for b in nodes if a < b)


def difference_nonnegative(small: Imset, large: Imset) -> bool:
    """True iff ``large - small >= 0`` coordinatewise."""
    _same_n(small, large)
    return small.ones <= large.ones


def dumps(im: Imset) -> str:
    return json.dumps(im.to_json(), separators=(", ", ": "))


def dense_csv(imsets: Iterable[Imset], n: int) -> str:
    """Coordinate-indexed dense matrix, header ``{i,j,...}``."""
    header = ",".join('"{' + ",".join(map(str, nodes_of(m))) + '}"' for m in coordinates(n))
    rows = [header]
    for im in imsets:
        if im.n != n:
            raise SizeMismatch(f"imset on {im.n} nodes in a table for {n}")
        rows.append(",".join(map(str, im.dense())))
    return "\n".join(rows) + "\n"
