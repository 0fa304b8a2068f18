"""LP relaxation and best-bound branch-and-bound."""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .model import (BOUND_EXCEEDED, EQ, GE, INFEASIBLE, INT_TOL, LE, MAX, OPTIMAL,
                    UNBOUNDED, MILPModel, ModelError, SolveResult, SolveStats)
from .simplex import LPOutcome, simplex

# dense tableau cells above which "auto" hands relaxations to HiGHS
DENSE_LIMIT = 10_000


class DenseSimplexLP:
    """Relaxations solved by the in-house tableau simplex."""

    name = "simplex"

    def __init__(self, model: MILPModel):
        c, A, senses, b, lb, ub, _ = model.arrays()
        self.c, self.A, self.senses, self.b = c, A.toarray(), list(senses), b

    def solve(self, lb: np.ndarray, ub: np.ndarray) -> LPOutcome:
        return simplex(self.c, self.A, self.senses, self.b, lb, ub)


class HighsLP:
    """Relaxations solved by HiGHS' dual simplex, warm-started across calls.

    One HiGHS model stays loaded; each solve applies only the bound changes
    relative to the previous call and restarts from the last basis.
    """

    name = "highs"

    def __init__(self, model: MILPModel):
        import highspy

        self._highspy = highspy
        c, A, senses, b, lb, ub, _ = model.arrays()
        lp = highspy.HighsLp()
        lp.num_col_ = len(c)
        lp.num_row_ = A.shape[0]
        lp.col_cost_ = c
        lp.col_lower_ = lb
        lp.col_upper_ = ub
        lp.row_lower_ = np.where(senses == LE, -np.inf, b)
        lp.row_upper_ = np.where(senses == GE, np.inf, b)
        Ac = A.tocsc()
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = Ac.indptr
        lp.a_matrix_.index_ = Ac.indices
        lp.a_matrix_.value_ = Ac.data
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("solver", "simplex")
        h.setOptionValue("simplex_strategy", 1)  # dual
        h.setOptionValue("threads", 1)
        h.setOptionValue("random_seed", 0)
        h.passModel(lp)
        self.h = h
        self.lb = lb.copy()
        self.ub = ub.copy()

    def solve(self, lb: np.ndarray, ub: np.ndarray) -> LPOutcome:
        if np.any(lb > ub):
            return LPOutcome(INFEASIBLE, None, None, 0)
        changed = np.flatnonzero((lb != self.lb) | (ub != self.ub))
        if changed.size:
            self.h.changeColsBounds(changed.size, changed.astype(np.int32),
                                    lb[changed], ub[changed])
            self.lb[changed] = lb[changed]
            self.ub[changed] = ub[changed]
        self.h.run()
        status = self.h.getModelStatus()
        MS = self._highspy.HighsModelStatus
        if status not in (MS.kOptimal, MS.kInfeasible):
            # warm starts occasionally stall numerically; retry from scratch
            self.h.clearSolver()
            self.h.run()
            status = self.h.getModelStatus()
        info = self.h.getInfo()
        nit = int(info.simplex_iteration_count)
        if status == MS.kOptimal:
            sol = self.h.getSolution()
            return LPOutcome(OPTIMAL, np.array(sol.col_value), float(info.objective_function_value),
                             nit, np.array(sol.col_dual))
        if status == MS.kInfeasible:
            return LPOutcome(INFEASIBLE, None, None, nit)
        if status in (MS.kUnbounded, MS.kUnboundedOrInfeasible):
            return LPOutcome(UNBOUNDED, None, None, nit)
        raise RuntimeError(f"HiGHS failed with status {self.h.modelStatusToString(status)}")


def make_lp(model: MILPModel, method: str = "auto"):
    if method == "auto":
        _, A, *_ = model.arrays()
        cells = (A.shape[0] + model.num_vars) * (2 * model.num_vars + 2 * A.shape[0])
        method = "simplex" if cells <= DENSE_LIMIT else "highs"
    if method == "simplex":
        return DenseSimplexLP(model)
    if method == "highs":
        return HighsLP(model)
    raise ValueError(f"unknown LP method {method!r}")


def _user_objective(model: MILPModel, internal: float) -> float:
    return -internal if model.sense == MAX else internal


def solve_lp_relaxation(model: MILPModel, method: str = "auto") -> SolveResult:
    """Optimal basic solution with integrality dropped."""
    start = time.perf_counter()
    if not model.empty_constraints_ok():
        return SolveResult(INFEASIBLE, stats=SolveStats(wall_time=time.perf_counter() - start))
    _, _, _, _, lb, ub, _ = model.arrays()
    out = make_lp(model, method).solve(lb.copy(), ub.copy())
    stats = SolveStats(nodes=1, lp_iterations=out.iterations,
                       wall_time=time.perf_counter() - start)
    if out.status != OPTIMAL:
        return SolveResult(out.status, stats=stats)
    values = {j: float(v) for j, v in enumerate(out.x)}
    obj = _user_objective(model, out.objective)
    return SolveResult(OPTIMAL, values, obj, stats, best_bound=obj)


@dataclass(order=True)
class _Node:
    key: tuple
    bound: float = field(compare=False)
    depth: int = field(compare=False)
    changes: tuple = field(compare=False, default=())  # ((var, lb, ub), ...) from the root
    origin: tuple = field(compare=False, default=())   # (var, side, distance, parent bound)


def _integral_objective(model: MILPModel) -> bool:
    """True when every feasible integral point has an integer objective value."""
    for j, a in model.objective.items():
        if not model.variables[j].integer or float(a) != int(a):
            return False
    return True


@dataclass
class _Search:
    incumbent: Optional[np.ndarray]
    incumbent_obj: float
    open_bound: float  # smallest LP bound among unexplored nodes, inf when none
    hit_limit: bool


def _search(model: MILPModel, lp, lb0: np.ndarray, ub0: np.ndarray, cutoff: float,
            stats: SolveStats, deadline: Optional[float], node_limit: Optional[int],
            prio: np.ndarray, strong: int, root=None, depth_first: bool = False,
            dive_every: int = 0) -> _Search:
    """Search for points with internal objective below ``cutoff``.

    Nodes are taken by best bound (deeper first on ties), or depth first when
    ``depth_first`` is set, always with creation order as the last tie-break.
    With ``dive_every > 0`` a rounding dive starts from the root and from
    every ``dive_every``-th node after it.
    """
    c, *_, integer = model.arrays()
    int_idx = np.flatnonzero(integer)
    prio = prio[int_idx]
    round_bound = _integral_objective(model)

    def prune_level(bound: float) -> float:
        # smallest internal objective a node with this LP bound could still reach
        if round_bound and math.isfinite(bound):
            return math.ceil(bound - 1e-6)
        return bound

    incumbent: Optional[np.ndarray] = None
    incumbent_obj = cutoff
    processed = 0

    def make_node(bound, depth, changes, origin=()):
        nonlocal seq
        seq += 1
        key = (-depth, seq) if depth_first else (bound, -depth, seq)
        return _Node(key, bound, depth, changes, origin)

    # pseudocosts: average bound gain per unit of rounding, per variable and side
    pc_sum = np.zeros((model.num_vars, 2))
    pc_cnt = np.zeros((model.num_vars, 2), dtype=int)

    def learn(j: int, side: int, dist: float, gain: float) -> None:
        if math.isfinite(gain) and dist > 1e-9:
            pc_sum[j, side] += max(gain, 0.0) / dist
            pc_cnt[j, side] += 1

    def strong_trial(j, lb, ub, x, bound):
        trial = []
        for side, (lo, hi) in enumerate(((lb[j], math.floor(x[j])), (math.ceil(x[j]), ub[j]))):
            tlb, tub = lb.copy(), ub.copy()
            tlb[j], tub[j] = lo, hi
            res = lp.solve(tlb, tub)
            stats.lp_iterations += res.iterations
            val = math.inf
            if res.status == OPTIMAL:
                val = res.objective
                accept(res.x)
            dist = x[j] - math.floor(x[j]) if side == 0 else math.ceil(x[j]) - x[j]
            learn(j, side, dist, val - bound)
            trial.append((val, j, lo, hi, side, dist))
        return trial

    def accept(x: np.ndarray) -> bool:
        """Take ``x`` as the incumbent when it is integral, feasible and better."""
        nonlocal incumbent, incumbent_obj
        xi = x[int_idx]
        if xi.size and np.abs(xi - np.round(xi)).max() > INT_TOL:
            return False
        xr = x.copy()
        xr[int_idx] = np.round(xi)
        obj = float(c @ xr)
        if obj >= incumbent_obj or not _feasible(model, xr):
            return False
        incumbent, incumbent_obj = xr, obj
        return True

    def dive(lb: np.ndarray, ub: np.ndarray, x: np.ndarray) -> None:
        # fix the integer variable closest to integrality, re-solve, repeat
        lb, ub = lb.copy(), ub.copy()
        for _ in range(len(int_idx)):
            xi = x[int_idx]
            frac = np.abs(xi - np.round(xi))
            if frac.max() <= INT_TOL:
                accept(x)
                return
            j = int(int_idx[int(np.argmin(np.where(frac > INT_TOL, frac, np.inf)))])
            lb[j] = ub[j] = round(x[j])
            out = lp.solve(lb, ub)
            stats.lp_iterations += out.iterations
            if out.status != OPTIMAL or prune_level(out.objective) >= incumbent_obj - 1e-9:
                return
            x = out.x

    seq = 0
    heap: list[_Node] = [make_node(-math.inf, 0, ())]
    hit_limit = False

    while heap:
        node = heap[0]
        if prune_level(node.bound) >= incumbent_obj - 1e-9:
            if not depth_first:
                break  # best-bound order: nothing left can improve
            heapq.heappop(heap)
            continue
        if (node_limit is not None and stats.nodes >= node_limit) or \
                (deadline is not None and time.perf_counter() > deadline):
            hit_limit = True
            break
        heapq.heappop(heap)
        lb, ub = lb0.copy(), ub0.copy()
        for j, lo, hi in node.changes:
            lb[j], ub[j] = lo, hi
        if root is not None:
            out, root = root, None  # iterations already counted by the caller
        else:
            out = lp.solve(lb, ub)
            stats.lp_iterations += out.iterations
        stats.nodes += 1
        processed += 1
        if out.status == UNBOUNDED:
            raise ModelError("LP relaxation unbounded despite finite bounds")
        if out.status != OPTIMAL:
            continue
        if node.origin:
            j, side, dist, parent = node.origin
            learn(j, side, dist, out.objective - parent)
        bound = out.objective
        if prune_level(bound) >= incumbent_obj - 1e-9:
            continue
        changes = node.changes
        if out.reduced_costs is not None and math.isfinite(incumbent_obj):
            # local reduced-cost fixing, inherited by the subtree
            nlb, nub = reduced_cost_bounds(model, out, lb, ub, incumbent_obj, round_bound)
            moved = np.flatnonzero((nlb != lb) | (nub != ub))
            if moved.size:
                lb, ub = nlb, nub
                changes = changes + tuple((int(j), lb[j], ub[j]) for j in moved)
        x = out.x
        xi = x[int_idx]
        frac = np.abs(xi - np.round(xi))
        if frac.size == 0 or frac.max() <= INT_TOL:
            accept(x)
            continue
        if dive_every and (processed - 1) % dive_every == 0:
            dive(lb, ub, x)
            if prune_level(bound) >= incumbent_obj - 1e-9:
                continue
        # most fractional: distance of the fractional part from 1/2
        dist = np.abs((xi - np.floor(xi)) - 0.5)
        fractional = frac > INT_TOL
        top = prio[fractional].max()
        score = np.where(fractional & (prio == top), dist, np.inf)
        depth = node.depth + 1
        if strong <= 0:
            j = int(int_idx[int(np.argmin(score))])
            f = x[j] - math.floor(x[j])
            children = [(bound, j, lb[j], math.floor(x[j]), 0, f),
                        (bound, j, math.ceil(x[j]), ub[j], 1, 1 - f)]
        else:
            children = _reliability_choice(score, int_idx, x, lb, ub, bound, pc_sum, pc_cnt,
                                           strong, strong_trial)
            children = [t for t in children if prune_level(t[0]) < incumbent_obj - 1e-9]
        for child_bound, j, lo, hi, side, dist in children:
            heapq.heappush(heap, make_node(child_bound, depth, changes + ((j, lo, hi),),
                                           (j, side, dist, bound)))
        stats.branches += 1

    open_bound = min((n.bound for n in heap), default=math.inf)
    return _Search(incumbent, incumbent_obj, open_bound, hit_limit)


RELIABLE = 4  # observations per side before a pseudocost replaces strong branching


def _reliability_choice(score, int_idx, x, lb, ub, bound, pc_sum, pc_cnt, strong, strong_trial):
    """Branching children picked by the product of estimated down and up gains.

    Candidates are the finite entries of ``score``.  Variables with fewer than
    RELIABLE observations on a side are strong-branched, at most ``strong`` of
    them, best pseudocost estimate first; the rest use their pseudocosts.
    """
    pos = np.flatnonzero(np.isfinite(score))
    pos = pos[np.argsort(score[pos], kind="stable")]
    cols = int_idx[pos]
    f_dn = x[cols] - np.floor(x[cols])
    f_up = 1.0 - f_dn
    seen = pc_cnt.sum(axis=0)
    avg = np.where(seen > 0, pc_sum.sum(axis=0) / np.maximum(seen, 1), 1.0)
    unit = np.where(pc_cnt[cols] > 0, pc_sum[cols] / np.maximum(pc_cnt[cols], 1), avg)
    est = np.maximum(unit[:, 0] * f_dn, 1e-6) * np.maximum(unit[:, 1] * f_up, 1e-6)
    order = np.argsort(-est, kind="stable")
    best, best_children = -1.0, None
    budget = strong
    for k in order:
        j = int(cols[k])
        if budget > 0 and pc_cnt[j].min() < RELIABLE:
            budget -= 1
            trial = strong_trial(j, lb, ub, x, bound)
            value = max(trial[0][0] - bound, 1e-6) * max(trial[1][0] - bound, 1e-6)
            children = trial
        else:
            value = est[k]
            children = [(bound, j, lb[j], math.floor(x[j]), 0, f_dn[k]),
                        (bound, j, math.ceil(x[j]), ub[j], 1, f_up[k])]
        if value > best:
            best, best_children = value, children
        if math.isinf(value):
            break
    return best_children


def reduced_cost_bounds(model: MILPModel, root: LPOutcome, lb: np.ndarray, ub: np.ndarray,
                        cutoff: float, integral: Optional[bool] = None
                        ) -> tuple[np.ndarray, np.ndarray]:
    """Tightened integer bounds that keep every point with objective below ``cutoff``.

    A nonbasic variable moved one unit off its bound raises the LP bound by at
    least its reduced cost, so it can only move as far as the slack between
    the root bound and the cutoff allows.
    """
    c, *_, integer = model.arrays()
    if integral is None:
        integral = _integral_objective(model)
    target = cutoff - 1 if integral else cutoff
    slack = target - root.objective + 1e-6 * max(1.0, abs(cutoff))
    lb, ub = lb.copy(), ub.copy()
    if slack < 0:
        return lb, ub
    r, x = root.reduced_costs, root.x
    at_lb = integer & (np.abs(x - lb) <= 1e-9) & (r > 1e-9)
    at_ub = integer & (np.abs(x - ub) <= 1e-9) & (r < -1e-9)
    with np.errstate(divide="ignore"):
        ub[at_lb] = np.minimum(ub[at_lb], lb[at_lb] + np.floor(slack / r[at_lb]))
        lb[at_ub] = np.maximum(lb[at_ub], ub[at_ub] - np.floor(slack / -r[at_ub]))
    return lb, ub


def propagate_bounds(model: MILPModel, lb: np.ndarray, ub: np.ndarray, rounds: int = 5):
    """Activity-based bound tightening; returns ``None`` if a row cannot be met.

    For a row ``a x <= b`` every variable can use at most the slack left by
    the smallest activity of the others.  Integer bounds are rounded inward.
    """
    _, A, senses, b, _, _, integer = model.arrays()
    lb, ub = lb.astype(float).copy(), ub.astype(float).copy()
    A = A.tocsr()
    # >= rows and the lower half of = rows become <= rows on the negated data
    upper = senses != GE
    lower = senses != LE
    G = sp.vstack([A[upper], -A[lower]]).tocsr()
    h = np.concatenate([b[upper], -b[lower]])
    rows = np.repeat(np.arange(G.shape[0]), np.diff(G.indptr))
    cols, vals = G.indices, G.data
    for _ in range(rounds):
        lo_term = np.where(vals > 0, vals * lb[cols], vals * ub[cols])
        min_act = np.bincount(rows, lo_term, minlength=G.shape[0])
        if np.any(min_act > h + 1e-9 * np.maximum(1, np.abs(h))):
            return None
        room = (h - min_act)[rows]  # slack available to each entry
        new_ub, new_lb = ub.copy(), lb.copy()
        pos, neg = vals > 0, vals < 0
        np.minimum.at(new_ub, cols[pos], lb[cols[pos]] + room[pos] / vals[pos])
        np.maximum.at(new_lb, cols[neg], ub[cols[neg]] + room[neg] / vals[neg])
        new_ub[integer] = np.floor(new_ub[integer] + 1e-9)
        new_lb[integer] = np.ceil(new_lb[integer] - 1e-9)
        if np.any(new_lb > new_ub + 1e-9):
            return None
        new_lb = np.minimum(new_lb, new_ub)
        if np.array_equal(new_lb, lb) and np.array_equal(new_ub, ub):
            break
        lb, ub = new_lb, new_ub
    return lb, ub


def restrict(model: MILPModel, lb: np.ndarray, ub: np.ndarray):
    """Submodel over the variables with ``lb < ub``; the rest are substituted.

    Bounds are propagated first.  Returns ``(submodel, kept indices, fixed
    values)``, or ``None`` when the bounds leave no feasible point.
    """
    tightened = propagate_bounds(model, lb, ub)
    if tightened is None:
        return None
    lb, ub = tightened
    _, A, senses, b, *_ = model.arrays()
    keep = np.flatnonzero(lb < ub)
    fixed = np.where(lb < ub, 0.0, lb)
    rest = b - A @ fixed
    sub = MILPModel(f"{model.name}-restricted")
    pos = {}
    for j in keep:
        var = model.variables[j]
        pos[int(j)] = sub.add_var(var.name, float(lb[j]), float(ub[j]), var.integer)
    names = [con.name for con in model.constraints if con.coeffs]  # rows of A
    A = A.tocsr()
    Ak = A[:, keep]
    pos_part, neg_part = Ak.maximum(0), Ak.minimum(0)
    max_act = pos_part @ ub[keep] + neg_part @ lb[keep]
    min_act = pos_part @ lb[keep] + neg_part @ ub[keep]
    tol = 1e-9 * np.maximum(1, np.abs(rest))
    # rows the bounds already imply carry no information
    implied = np.where(senses == LE, max_act <= rest + tol,
                       np.where(senses == GE, min_act >= rest - tol,
                                (max_act <= rest + tol) & (min_act >= rest - tol)))
    for i in np.flatnonzero(~implied):
        lo, hi = Ak.indptr[i], Ak.indptr[i + 1]
        coeffs = {int(j): a for j, a in zip(Ak.indices[lo:hi], Ak.data[lo:hi])}
        if not coeffs:
            return None
        sub.add_constraint(coeffs, senses[i], rest[i], names[i])
    sub.set_objective(model.sense, {pos[j]: a for j, a in model.objective.items() if j in pos})
    return sub, keep, fixed


def solve_bb(model: MILPModel, time_limit: Optional[float] = None,
             node_limit: Optional[int] = None, method: str = "auto",
             priority: Optional[Sequence[int]] = None, strong: int = 0,
             incumbent: Optional[dict] = None, depth_first: bool = False,
             heuristic: Optional[Callable[[np.ndarray], Optional[dict]]] = None,
             dive_every: int = 0) -> SolveResult:
    """Exact best-bound branch-and-bound.

    Without ``strong`` it branches on the most fractional integer variable (lowest index on ties).
    With ``priority`` (one integer per variable), only fractional variables
    of the highest priority present are candidates.  ``strong > 0`` turns on
    reliability branching: candidates are scored by the product of their
    estimated down and up bound gains, using pseudocosts once a variable has
    enough history and solving both children (at most ``strong`` candidates
    per node) otherwise.  Open nodes
    are ordered by LP bound, then depth (deeper first), then creation order,
    which makes the search fully deterministic; ``depth_first`` orders them
    by depth alone, a cheap way to reach feasible points early.

    A feasible ``incumbent`` (variable index to value) seeds the search, and
    ``heuristic`` may propose another one from the root LP solution.  When
    the LP backend reports reduced costs, the root bound and the incumbent
    are used to tighten bounds, and the search continues on the submodel of
    variables that are still free.  ``dive_every``
    enables the rounding dives described in :func:`_search`.
    """
    start = time.perf_counter()
    deadline = None if time_limit is None else start + time_limit
    stats = SolveStats()
    if not model.empty_constraints_ok():
        stats.wall_time = time.perf_counter() - start
        return SolveResult(INFEASIBLE, stats=stats)
    c, A, _, _, lb0, ub0, integer = model.arrays()
    prio = np.zeros(model.num_vars) if priority is None else np.asarray(priority, dtype=float)
    if len(prio) != model.num_vars:
        raise ValueError("priority needs one entry per variable")

    def as_point(values: dict) -> np.ndarray:
        x = np.array([values[j] for j in range(model.num_vars)], dtype=float)
        if not _feasible(model, x) or np.any(np.abs(x[integer] - np.round(x[integer])) > INT_TOL):
            raise ModelError("incumbent is not a feasible point")
        return x

    best_x, best_obj = None, math.inf
    if incumbent is not None:
        best_x = as_point(incumbent)
        best_obj = float(c @ best_x)

    lp = make_lp(model, method)
    root = lp.solve(lb0.copy(), ub0.copy())
    stats.lp_iterations += root.iterations
    if heuristic is not None and root.status == OPTIMAL:
        proposal = heuristic(root.x)
        if proposal is not None:
            x = as_point(proposal)
            if float(c @ x) < best_obj:
                best_x, best_obj = x, float(c @ x)
    found: Optional[_Search] = None
    if best_x is not None and root.status == OPTIMAL and root.reduced_costs is not None:
        lb1, ub1 = reduced_cost_bounds(model, root, lb0, ub0, best_obj)
        if np.count_nonzero(lb1 < ub1) < np.count_nonzero(lb0 < ub0):
            stats.nodes += 1
            restricted = restrict(model, lb1, ub1)
            if restricted is None:
                found = _Search(None, best_obj, math.inf, False)
            else:
                sub, keep, fixed = restricted
                offset = float(c @ fixed)
                sub_lp = make_lp(sub, method)
                found = _search(sub, sub_lp, *sub.arrays()[4:6], best_obj - offset,
                                stats, deadline, node_limit, prio[keep], strong,
                                depth_first=depth_first, dive_every=dive_every)
                found.incumbent_obj += offset
                found.open_bound += offset
                if found.incumbent is not None:
                    x = fixed.copy()
                    x[keep] = found.incumbent
                    found.incumbent = x
    if found is None:
        found = _search(model, lp, lb0, ub0, best_obj, stats, deadline, node_limit, prio,
                        strong, root=root, depth_first=depth_first, dive_every=dive_every)
    if found.incumbent is not None:
        best_x, best_obj = found.incumbent, found.incumbent_obj

    stats.wall_time = time.perf_counter() - start
    best_bound = min(found.open_bound, best_obj)
    if found.hit_limit:
        status = BOUND_EXCEEDED
    elif best_x is None:
        return SolveResult(INFEASIBLE, stats=stats)
    else:
        status = OPTIMAL
    values: dict = {}
    obj = None
    exact_ok = None
    if best_x is not None:
        values = {j: (int(v) if integer[j] else float(v)) for j, v in enumerate(best_x)}
        exact_ok = not model.violations(values, exact=True)
        obj = exact_objective(model, values)
    bb = None if not math.isfinite(best_bound) else _user_objective(model, best_bound)
    return SolveResult(status, values, obj, stats, best_bound=bb, exact_check=exact_ok)


def _feasible(model: MILPModel, x: np.ndarray, tol: float = 1e-6) -> bool:
    _, A, senses, b, lb, ub, _ = model.arrays()
    if np.any(x < lb - tol) or np.any(x > ub + tol):
        return False
    ax = A @ x
    scale = tol * np.maximum(1.0, np.abs(b))
    ok = np.where(senses == LE, ax <= b + scale,
                  np.where(senses == GE, ax >= b - scale, np.abs(ax - b) <= scale))
    return bool(ok.all())


def exact_objective(model: MILPModel, values) -> int | Fraction:
    total = sum((Fraction(a) * Fraction(values[j]) for j, a in model.objective.items()),
                Fraction(0))
    return int(total) if total.denominator == 1 else total
