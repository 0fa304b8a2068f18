"""Dense two-phase tableau simplex for small bounded LPs.

Dantzig pricing is used until a streak of degenerate pivots is seen, after
which Bland's rule (lowest-index entering column, lowest-index leaving basic
variable on ratio ties) takes over for the rest of the phase, so the method
cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED

PIVOT_TOL = 1e-9
PHASE1_TOL = 1e-7


@dataclass
class LPOutcome:
    status: str
    x: Optional[np.ndarray]
    objective: Optional[float]
    iterations: int
    reduced_costs: Optional[np.ndarray] = None


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int], bland_after: int):
        self.T = T
        self.basis = basis
        self.bland_after = bland_after
        self.iterations = 0

    def pivot(self, r: int, k: int) -> None:
        T = self.T
        T[r] /= T[r, k]
        col = T[:, k].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = k

    def run(self, allowed: np.ndarray, max_iter: int) -> str:
        T = self.T
        m = T.shape[0] - 1
        streak = 0
        bland = False
        while True:
            d = T[-1, :-1]
            cand = np.flatnonzero((d < -PIVOT_TOL) & allowed)
            if cand.size == 0:
                return OPTIMAL
            if self.iterations >= max_iter:
                raise RuntimeError("simplex iteration limit reached")
            k = int(cand[0]) if bland else int(cand[np.argmin(d[cand])])
            colk = T[:m, k]
            rows = np.flatnonzero(colk > PIVOT_TOL)
            if rows.size == 0:
                return UNBOUNDED
            ratios = T[rows, -1] / colk[rows]
            best = ratios.min()
            ties = rows[ratios <= best + PIVOT_TOL]
            r = int(min(ties, key=lambda i: self.basis[i]))
            if best <= PIVOT_TOL:
                streak += 1
                if streak >= self.bland_after:
                    bland = True
            else:
                streak = 0
            self.pivot(r, k)
            self.iterations += 1


def simplex(c: np.ndarray, A: np.ndarray, senses, b: np.ndarray, lb: np.ndarray,
            ub: np.ndarray, max_iter: int = 50_000, bland_after: int = 25) -> LPOutcome:
    """Minimise ``c @ x`` subject to ``A x (senses) b`` and ``lb <= x <= ub``."""
    c = np.asarray(c, dtype=float)
    n = c.size
    b = np.asarray(b, dtype=float)
    A = np.asarray(A, dtype=float).reshape(len(b), n)
    lb = np.asarray(lb, dtype=float)
    ub = np.asarray(ub, dtype=float)
    if np.any(lb > ub):
        return LPOutcome(INFEASIBLE, None, None, 0)
    if n == 0:
        ok = all((s == LE and v >= -1e-9) or (s == GE and v <= 1e-9) or (s == EQ and abs(v) <= 1e-9)
                 for s, v in zip(senses, b))
        return (LPOutcome(OPTIMAL, np.zeros(0), 0.0, 0, np.zeros(0)) if ok
                else LPOutcome(INFEASIBLE, None, None, 0))

    # shift to y = x - lb >= 0 and add y <= ub - lb rows
    rows = np.vstack([A, np.eye(n)])
    rhs = np.concatenate([np.asarray(b, dtype=float) - A @ lb, ub - lb])
    rel = list(senses) + [LE] * n
    for i in range(len(rhs)):
        if rhs[i] < 0:
            rows[i] = -rows[i]
            rhs[i] = -rhs[i]
            rel[i] = {LE: GE, GE: LE, EQ: EQ}[rel[i]]

    m = len(rhs)
    n_slack = sum(1 for s in rel if s != EQ)
    n_art = sum(1 for s in rel if s != LE)
    width = n + n_slack + n_art
    T = np.zeros((m + 1, width + 1))
    T[:m, :n] = rows
    T[:m, -1] = rhs
    basis = [0] * m
    s_col, a_col = n, n + n_slack
    art_cols = []
    for i, s in enumerate(rel):
        if s == LE:
            T[i, s_col] = 1.0
            basis[i] = s_col
            s_col += 1
        elif s == GE:
            T[i, s_col] = -1.0
            s_col += 1
            T[i, a_col] = 1.0
            basis[i] = a_col
            art_cols.append(a_col)
            a_col += 1
        else:
            T[i, a_col] = 1.0
            basis[i] = a_col
            art_cols.append(a_col)
            a_col += 1

    tab = _Tableau(T, basis, bland_after)
    if art_cols:
        cost1 = np.zeros(width)
        cost1[art_cols] = 1.0
        T[-1, :-1] = cost1
        T[-1, -1] = 0.0
        for i, bv in enumerate(basis):
            if cost1[bv]:
                T[-1] -= T[i]
        tab.run(np.ones(width, dtype=bool), max_iter)
        if -T[-1, -1] > PHASE1_TOL * max(1.0, float(np.abs(rhs).max(initial=0.0))):
            return LPOutcome(INFEASIBLE, None, None, tab.iterations)
        is_art = np.zeros(width, dtype=bool)
        is_art[art_cols] = True
        keep = []
        for i in range(m):
            if is_art[tab.basis[i]]:
                nz = np.flatnonzero((np.abs(T[i, :-1]) > PIVOT_TOL) & ~is_art)
                if nz.size:
                    tab.pivot(i, int(nz[0]))
                    keep.append(i)
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        T = np.delete(T, art_cols, axis=1)
        basis = [tab.basis[i] for i in keep]
        width -= len(art_cols)
        done = tab.iterations
        tab = _Tableau(T, basis, bland_after)
        tab.iterations = done
    cost2 = np.zeros(width)
    cost2[:n] = c
    T = tab.T
    T[-1, :-1] = cost2
    T[-1, -1] = 0.0
    for i, bv in enumerate(tab.basis):
        if cost2[bv]:
            T[-1] -= cost2[bv] * T[i]
    status = tab.run(np.ones(width, dtype=bool), max_iter)
    if status == UNBOUNDED:
        return LPOutcome(UNBOUNDED, None, None, tab.iterations)
    y = np.zeros(width)
    for i, bv in enumerate(tab.basis):
        y[bv] = T[i, -1]
    x = lb + y[:n]
    return LPOutcome(OPTIMAL, x, float(c @ x), tab.iterations)
