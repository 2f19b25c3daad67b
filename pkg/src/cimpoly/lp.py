"""Exact linear programming.

Two-phase primal simplex with Bland's anti-cycling rule on a fraction-free
integer tableau: entries are kept as integers ``T`` over a common
denominator ``D`` (the current basis determinant), and every pivot divides
exactly. The int64 fast path switches to Python ints before any product
could overflow, so no rounding ever happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_SAFE = 1 << 30


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    duals: tuple[Fraction, ...] | None = None
    pivots: int = 0


def _integer_row(values: Sequence) -> tuple[list[int], int]:
    """Scale a rational row to integers; returns (row, scale)."""
    fr = [Fraction(v) for v in values]
    s = lcm(*(f.denominator for f in fr)) if fr else 1
    return [int(f * s) for f in fr], s


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int]):
        self.T = T
        self.D = 1
        self.basis = basis
        self.pivots = 0

    def _widen(self):
        if self.T.dtype != object:
            peak = int(np.abs(self.T).max(initial=0))
            if peak >= _SAFE or self.D >= _SAFE:
                self.T = self.T.astype(object)

    def pivot(self, r: int, col: int) -> None:
        self._widen()
        T = self.T
        p = T[r, col]
        colv = T[:, col].copy()
        colv[r] = 0
        num = T * p - np.outer(colv, T[r])
        num[r] = T[r]
        D = self.D
        if D != 1:
            rows = np.arange(T.shape[0]) != r
            sub = num[rows]
            q = sub // D  # np.divmod has no object-dtype loop
            if np.any(sub - q * D != 0):
                raise ArithmeticError("inexact division in fraction-free pivot")
            num[rows] = q
        if p < 0:
            num = -num
            p = -p
        self.T = num
        self.D = int(p)
        self.basis[r] = col
        self.pivots += 1

    def run(self, allowed: int) -> str:
        """Bland's rule iterations on the objective (last) row."""
        T = self.T
        while True:
            T = self.T
            z = T[-1, :allowed]
            neg = np.flatnonzero(z < 0)
            if neg.size == 0:
                return OPTIMAL
            col = int(neg[0])
            column = T[:-1, col]
            cand = np.flatnonzero(column > 0)
            if cand.size == 0:
                return UNBOUNDED
            rhs = T[:-1, -1]
            best = None
            for i in cand:
                ratio = Fraction(int(rhs[i]), int(column[i]))
                key = (ratio, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, int(i))
            self.pivot(best[1], col)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Solve ``max c.x  s.t.  A x = b, x >= 0`` exactly.

    Data may be ints or Fractions. Duals ``y`` satisfy ``A^T y >= c`` and
    ``b.y = value`` at optimality.
    """
    if all(isinstance(a, np.ndarray) and a.dtype.kind in "iu" for a in (A, b, c)):
        Ai = np.asarray(A, dtype=np.int64)
        bi = np.asarray(b, dtype=np.int64)
        scales = np.where(bi < 0, -1, 1)
        M = np.hstack([Ai, bi.reshape(-1, 1)]) * scales.reshape(-1, 1)
        scales = scales.tolist()
        cint, cscale = [int(v) for v in c], 1
    else:
        rows = []
        scales = []
        for i in range(len(A)):
            if len(A[i]) != len(c):
                raise ValueError("ragged constraint matrix")
            r, s = _integer_row(list(A[i]) + [b[i]])
            if r[-1] < 0:
                r = [-v for v in r]
                s = -s
            rows.append(r)
            scales.append(s)
        cint, cscale = _integer_row(c)
        M = np.array(rows, dtype=object).reshape(len(A), len(c) + 1)
        if M.size == 0 or int(np.abs(M).max()) < _SAFE:
            M = M.astype(np.int64)
    m, nvar = M.shape[0], M.shape[1] - 1

    # reuse identity columns as the starting basis where possible
    basis = [-1] * m
    body = M[:, :nvar]
    unit = np.flatnonzero(((body != 0).sum(axis=0) == 1) & ((body == 1).sum(axis=0) == 1))
    for j in unit:
        i = int(np.flatnonzero(body[:, j])[0])
        if basis[i] < 0:
            basis[i] = int(j)
    art_rows = [i for i in range(m) if basis[i] < 0]
    nart = len(art_rows)
    width = nvar + nart + 1
    T = np.zeros((m + 1, width), dtype=M.dtype)
    T[:m, :nvar] = body
    T[:m, -1] = M[:, -1]
    for k, i in enumerate(art_rows):
        T[i, nvar + k] = 1
        basis[i] = nvar + k
    start = list(basis)

    tab = _Tableau(T, basis)
    # phase I: maximize -sum(artificials)
    if nart:
        for i in art_rows:
            tab.T[-1] -= tab.T[i]
        for k in range(nart):
            tab.T[-1, nvar + k] = 0
        tab.run(nvar + nart)
        if tab.T[-1, -1] < 0:
            return LPResult(INFEASIBLE, pivots=tab.pivots)
        # drive artificials out; a row with no nonzero structural entry is
        # redundant and keeps its artificial basic at zero for good
        for r in range(m):
            if tab.basis[r] < nvar:
                continue
            nz = np.flatnonzero(tab.T[r, :nvar] != 0)
            if nz.size:
                tab.pivot(r, int(nz[0]))

    # phase II objective row: D * (c_B B^-1 A - c)
    T = tab.T
    D = tab.D
    cvec = np.zeros(width, dtype=object)
    cvec[:nvar] = cint
    cB = np.array([cvec[j] for j in tab.basis], dtype=object)
    body = T[:-1].astype(object)
    z = cB.dot(body) - cvec * D
    z[-1] = cB.dot(body[:, -1])
    if T.dtype != object:
        try:
            z = z.astype(np.int64)
        except OverflowError:
            tab.T = T.astype(object)
    tab.T = tab.T.copy()
    tab.T[-1] = z
    status = tab.run(nvar)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)

    T = tab.T
    D = tab.D
    x = [Fraction(0)] * nvar
    for r, j in enumerate(tab.basis):
        if j < nvar:
            x[j] = Fraction(int(T[r, -1]), D)
    value = Fraction(int(T[-1, -1]), D) / cscale
    # dual of row i from the reduced cost of its starting unit column
    duals = [Fraction(0)] * m
    for i in range(m):
        j = start[i]
        cj = cint[j] if j < nvar else 0
        yi = Fraction(int(T[-1, j]), D) + cj
        duals[i] = yi * scales[i] / cscale
    return LPResult(OPTIMAL, value, tuple(x), tuple(duals), tab.pivots)


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix."""
    M = [[Fraction(v) for v in r] for r in rows]
    if not M:
        return 0
    rk = 0
    ncols = len(M[0])
    for col in range(ncols):
        piv = next((i for i in range(rk, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        pr = M[rk]
        for i in range(len(M)):
            if i != rk and M[i][col] != 0:
                f = M[i][col] / pr[col]
                M[i] = [a - f * b for a, b in zip(M[i], pr)]
        rk += 1
        if rk == len(M):
            break
    return rk
