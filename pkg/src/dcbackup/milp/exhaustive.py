"""Brute-force enumeration of all-integer models; the test oracle for solve_bb."""

from __future__ import annotations

import math
import time

import numpy as np

from .model import EQ, GE, INFEASIBLE, LE, MAX, OPTIMAL, MILPModel, SolveResult, SolveStats

DEFAULT_CAP = 10**7
CHUNK = 1 << 16


class DomainTooLarge(ValueError):
    """The integer domain product exceeds the enumeration cap."""


def domain_size(model: MILPModel) -> int:
    return math.prod(int(math.floor(v.ub)) - int(math.ceil(v.lb)) + 1 for v in model.variables)


def solve_exhaustive(model: MILPModel, cap: int = DEFAULT_CAP) -> SolveResult:
    """Globally optimal point by enumerating every integer assignment.

    Points are visited in mixed-radix order with the last variable varying
    fastest; among equal objectives the first visited point wins.
    """
    start = time.perf_counter()
    if any(not v.integer for v in model.variables):
        raise ValueError("solve_exhaustive needs an all-integer model")
    size = domain_size(model)
    if size > cap:
        raise DomainTooLarge(f"domain has {size} points, cap is {cap}")
    stats = SolveStats()
    if size <= 0 or not model.empty_constraints_ok():
        stats.wall_time = time.perf_counter() - start
        return SolveResult(INFEASIBLE, stats=stats)

    n = model.num_vars
    lo = np.array([math.ceil(v.lb) for v in model.variables], dtype=np.int64)
    radix = np.array([math.floor(v.ub) for v in model.variables], dtype=np.int64) - lo + 1
    # integer arithmetic keeps constraint checks exact for integral data
    rows = [con for con in model.constraints if con.coeffs]
    integral = all(float(a).is_integer() for con in rows for a in con.coeffs.values()) and \
        all(float(con.rhs).is_integer() for con in rows) and \
        all(float(a).is_integer() for a in model.objective.values())
    dtype = np.int64 if integral else float
    A = np.zeros((len(rows), n), dtype=dtype)
    b = np.zeros(len(rows), dtype=dtype)
    for i, con in enumerate(rows):
        for j, a in con.coeffs.items():
            A[i, j] = a
        b[i] = con.rhs
    senses = np.array([con.sense for con in rows], dtype=object)
    le, ge, eq = senses == LE, senses == GE, senses == EQ
    c = np.zeros(n, dtype=dtype)
    for j, a in model.objective.items():
        c[j] = a
    sign = -1 if model.sense == MAX else 1
    tol = 0 if integral else 1e-9

    strides = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        strides[j] = strides[j + 1] * radix[j + 1]

    best_val = None
    best_x = None
    for first in range(0, size, CHUNK):
        idx = np.arange(first, min(first + CHUNK, size), dtype=np.int64)
        X = (idx[:, None] // strides[None, :]) % radix[None, :] + lo[None, :]
        X = X.astype(dtype)
        ok = np.ones(len(idx), dtype=bool)
        if rows:
            AX = X @ A.T
            ok &= np.all(AX[:, le] <= b[le] + tol, axis=1)
            ok &= np.all(AX[:, ge] >= b[ge] - tol, axis=1)
            ok &= np.all(np.abs(AX[:, eq] - b[eq]) <= tol, axis=1)
        stats.nodes += len(idx)
        if not ok.any():
            continue
        vals = sign * (X[ok] @ c)
        k = int(np.argmin(vals))
        if best_val is None or vals[k] < best_val:
            best_val, best_x = vals[k], X[ok][k]

    stats.wall_time = time.perf_counter() - start
    if best_x is None:
        return SolveResult(INFEASIBLE, stats=stats)
    values = {j: int(v) for j, v in enumerate(best_x)}
    obj = sign * best_val
    obj = int(obj) if integral else float(obj)
    return SolveResult(OPTIMAL, values, obj, stats, best_bound=obj, exact_check=True)
