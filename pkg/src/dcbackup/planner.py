"""Backup ILP construction, solving, plan extraction and plan auditing.

Variable families per data item ``d``:

* ``M[d, v]`` binary, DC ``v`` holds part of ``d``;
* ``N[d, v]`` integer, amount of ``d`` stored at ``v``;
* ``U[d, k]`` binary, candidate path ``k`` of ``d`` carries data;
* ``B[d, k]`` integer, wavelength channels reserved on that path.

One channel moves one data unit per time unit, so the transfer-time limit
``N / sum(B) <= epsilon1`` is imposed as ``N <= epsilon1 * sum(B)``.
"""

from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .milp import (EQ, GE, LE, MAX, MIN, OPTIMAL, MILPModel, SolveResult, restrict, solve_bb)
from .netmodel import Instance, validate_instance

MINCOST = "mincost"
MAXBW = "maxbw"

# "lambda": B <= lambda*U and N <= lambda*M with the instance constant.
# "tight": the same rows with each variable's own upper bound as the
# multiplier; identical integer points, much stronger LP relaxation.
LINKING = ("tight", "lambda")


class InstanceInvalid(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(map(str, violations)))
        self.violations = violations


class PlanUnavailable(ValueError):
    """Raised when asked for a plan from a non-optimal solve."""


@dataclass
class VarIndex:
    objective: str
    M: dict[tuple[int, int], int] = field(default_factory=dict)
    N: dict[tuple[int, int], int] = field(default_factory=dict)
    U: dict[tuple[int, int], int] = field(default_factory=dict)
    B: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.M) + len(self.N) + len(self.U) + len(self.B)


def _add_constraints(instance: Instance, model: MILPModel, linking: str) -> VarIndex:
    if linking not in LINKING:
        raise ValueError(f"unknown linking mode {linking!r}")
    net = instance.network
    safe = instance.safe_dcs
    lam = instance.lam
    idx = VarIndex(MINCOST)
    cap = {l.endpoints: l.capacity for l in net.links}

    for d in instance.data_items:
        for v in safe:
            s_v = net.dc_nodes[v].storage_capacity
            idx.M[d.id, v] = model.add_var(f"M_d{d.id}_v{v}", 0, 1)
            idx.N[d.id, v] = model.add_var(f"N_d{d.id}_v{v}", 0, min(s_v, d.size))
        for k, p in enumerate(d.candidate_paths):
            bottleneck = min(cap[e] for e in p.links)
            idx.U[d.id, k] = model.add_var(f"U_d{d.id}_p{k}", 0, 1)
            idx.B[d.id, k] = model.add_var(f"B_d{d.id}_p{k}", 0, bottleneck)

    for v in safe:
        model.add_constraint({idx.N[d.id, v]: 1 for d in instance.data_items}, LE,
                             net.dc_nodes[v].storage_capacity, f"storage[{v}]")
    for d in instance.data_items:
        model.add_constraint({idx.N[d.id, v]: 1 for v in safe}, EQ, d.size, f"conserve[{d.id}]")

    on_link: dict[tuple[int, int], dict[int, int]] = {l.endpoints: {} for l in net.links}
    for d in instance.data_items:
        for k, p in enumerate(d.candidate_paths):
            for e in p.links:
                on_link[e][idx.B[d.id, k]] = 1
    for l in net.links:
        model.add_constraint(on_link[l.endpoints], LE, l.capacity, f"link[{l.u},{l.v}]")

    for d in instance.data_items:
        by_dest: dict[int, list[int]] = {v: [] for v in safe}
        for k, p in enumerate(d.candidate_paths):
            by_dest[p.destination].append(k)
        for v in safe:
            ks = by_dest[v]
            pn = len(ks) if instance.pn is None else instance.pn
            model.add_constraint({idx.U[d.id, k]: 1 for k in ks}, LE, pn,
                                 f"pathcap[{d.id},{v}]")
        model.add_constraint({idx.M[d.id, v]: 1 for v in safe}, GE, 1, f"mindcs[{d.id}]")
        model.add_constraint({idx.M[d.id, v]: 1 for v in safe}, LE, instance.vn,
                             f"maxdcs[{d.id}]")
        for k, p in enumerate(d.candidate_paths):
            u, b = idx.U[d.id, k], idx.B[d.id, k]
            model.add_constraint({u: 1, idx.M[d.id, p.destination]: -1}, LE, 0,
                                 f"pathdest[{d.id},{k}]")
        for v in safe:
            coeffs = {idx.U[d.id, k]: 1 for k in by_dest[v]}
            coeffs[idx.M[d.id, v]] = -1
            model.add_constraint(coeffs, GE, 0, f"dcpath[{d.id},{v}]")
        for k in range(len(d.candidate_paths)):
            u, b = idx.U[d.id, k], idx.B[d.id, k]
            model.add_constraint({u: 1, b: -1}, LE, 0, f"uselow[{d.id},{k}]")
            big = lam if linking == "lambda" else model.variables[b].ub
            model.add_constraint({b: 1, u: -big}, LE, 0, f"usehigh[{d.id},{k}]")
        for v in safe:
            m, n = idx.M[d.id, v], idx.N[d.id, v]
            model.add_constraint({m: 1, n: -1}, LE, 0, f"dclow[{d.id},{v}]")
            big = lam if linking == "lambda" else model.variables[n].ub
            model.add_constraint({n: 1, m: -big}, LE, 0, f"dchigh[{d.id},{v}]")
            coeffs = {idx.B[d.id, k]: -instance.epsilon1 for k in by_dest[v]}
            coeffs[n] = 1
            model.add_constraint(coeffs, LE, 0, f"time[{d.id},{v}]")
    return idx


def _checked(instance: Instance) -> None:
    problems = validate_instance(instance)
    if problems:
        raise InstanceInvalid(problems)


def build_backup_ilp(instance: Instance, linking: str = "tight") -> tuple[MILPModel, VarIndex]:
    """Minimum storage-plus-transmission cost backup model."""
    _checked(instance)
    model = MILPModel("backup-mincost")
    idx = _add_constraints(instance, model, linking)
    obj: dict[int, int] = {}
    for d in instance.data_items:
        for v in instance.safe_dcs:
            obj[idx.N[d.id, v]] = instance.network.dc_nodes[v].storage_unit_cost
        for k, p in enumerate(d.candidate_paths):
            obj[idx.B[d.id, k]] = p.path_cost
    model.set_objective(MIN, obj)
    return model, idx


def build_maxbandwidth_ilp(instance: Instance,
                          linking: str = "tight") -> tuple[MILPModel, VarIndex]:
    """Same feasible set; maximise total reserved path bandwidth."""
    _checked(instance)
    model = MILPModel("backup-maxbw")
    idx = _add_constraints(instance, model, linking)
    idx.objective = MAXBW
    model.set_objective(MAX, {j: 1 for j in idx.B.values()})
    return model, idx


# ---------------------------------------------------------------------------
# plans

PathKey = tuple[int, tuple[int, ...]]


@dataclass
class BackupPlan:
    stored: dict[tuple[int, int], int]          # (item, dc) -> units, nonzero only
    channels: dict[PathKey, int]                # (item, path nodes) -> channels
    used_dcs: frozenset[tuple[int, int]]
    used_paths: frozenset[PathKey]
    storage_cost: int = 0
    transmission_cost: int = 0
    total_cost: int = 0
    backup_time: dict[tuple[int, int], Fraction | float] = field(default_factory=dict)
    objective: str = MINCOST
    status: str = OPTIMAL
    stated_costs: dict[str, int] = field(default_factory=dict)


def plan_costs(instance: Instance, stored, channels) -> tuple[int, int]:
    dcs = instance.network.dc_nodes
    net = instance.network
    # entries naming unknown DCs or links are skipped here and flagged by validate_plan
    storage = sum(dcs[v].storage_unit_cost * n for (_, v), n in stored.items()
                  if v in dcs and dcs[v].storage_unit_cost is not None)
    transmission = 0
    for (_, nodes), b in channels.items():
        hops = list(zip(nodes, nodes[1:]))
        if all(net.has_link(a, c) for a, c in hops):
            transmission += b * sum(net.link(a, c).cost for a, c in hops)
    return storage, transmission


def backup_times(instance: Instance, stored, channels) -> dict[tuple[int, int], Fraction | float]:
    """Transfer time per (item, dc); zero when nothing is stored there."""
    bw: dict[tuple[int, int], int] = defaultdict(int)
    for (d, nodes), b in channels.items():
        bw[d, nodes[-1]] += b
    out = {}
    for d in instance.data_items:
        for v in instance.safe_dcs:
            n = stored.get((d.id, v), 0)
            if n == 0:
                out[d.id, v] = Fraction(0)
            elif bw[d.id, v] == 0:
                out[d.id, v] = math.inf
            else:
                out[d.id, v] = Fraction(n, bw[d.id, v])
    return out


def make_plan(instance: Instance, stored, channels, used_dcs=None, used_paths=None,
              objective: str = MINCOST, status: str = OPTIMAL) -> BackupPlan:
    stored = {k: int(n) for k, n in sorted(stored.items()) if n}
    channels = {k: int(b) for k, b in sorted(channels.items()) if b}
    if used_dcs is None:
        used_dcs = stored.keys()
    if used_paths is None:
        used_paths = channels.keys()
    s, t = plan_costs(instance, stored, channels)
    return BackupPlan(stored, channels, frozenset(used_dcs), frozenset(used_paths), s, t, s + t,
                      backup_times(instance, stored, channels), objective, status)


def extract_plan(instance: Instance, index: VarIndex, result: SolveResult) -> BackupPlan:
    if result.status != OPTIMAL:
        raise PlanUnavailable(f"solve status is {result.status}")
    vals = result.values
    items = {d.id: d for d in instance.data_items}
    stored = {key: int(vals[j]) for key, j in index.N.items()}
    channels = {(d, items[d].candidate_paths[k].nodes): int(vals[j])
                for (d, k), j in index.B.items()}
    used_dcs = [key for key, j in index.M.items() if vals[j] == 1]
    used_paths = [(d, items[d].candidate_paths[k].nodes)
                  for (d, k), j in index.U.items() if vals[j] == 1]
    plan = make_plan(instance, stored, channels, used_dcs, used_paths, index.objective)
    if index.objective == MINCOST and abs(plan.total_cost - result.objective_value) > 1e-6:
        raise AssertionError(
            f"recomputed cost {plan.total_cost} != solver objective {result.objective_value}")
    return plan


@dataclass(frozen=True)
class PlanViolation:
    constraint: str
    key: tuple
    detail: str

    def __str__(self):
        return f"{self.constraint} {self.key}: {self.detail}"


def validate_plan(instance: Instance, plan: BackupPlan) -> list[PlanViolation]:
    """Check the plan against every model constraint in its original form."""
    out: list[PlanViolation] = []
    net = instance.network
    safe = instance.safe_dcs
    lam = instance.lam
    eps = Fraction(instance.epsilon1)

    def bad(c, key, detail):
        out.append(PlanViolation(c, key, detail))

    items = {d.id: d for d in instance.data_items}
    cand = {d.id: {p.nodes: p for p in d.candidate_paths} for d in instance.data_items}
    for (d, v), n in plan.stored.items():
        if d not in items or v not in safe:
            bad("unknown-target", (d, v), "storage at a non-safe DC or unknown item")
        if n < 0:
            bad("nonnegative", (d, v), f"N={n}")
    for (d, nodes), b in plan.channels.items():
        if d not in items or nodes not in cand[d]:
            bad("unknown-path", (d, nodes), "not a candidate path of the item")
        if b < 0:
            bad("nonnegative", (d, nodes), f"B={b}")
    for d, nodes in plan.used_paths:
        if d not in items or nodes not in cand[d]:
            bad("unknown-path", (d, nodes), "selected path is not a candidate")

    def N(d, v):
        return plan.stored.get((d, v), 0)

    def M(d, v):
        return 1 if (d, v) in plan.used_dcs else 0

    def paths(d, v=None):
        return [p for p in items[d].candidate_paths if v is None or p.destination == v]

    def B(d, p):
        return plan.channels.get((d, p.nodes), 0)

    def U(d, p):
        return 1 if (d, p.nodes) in plan.used_paths else 0

    for v in safe:
        used = sum(N(d, v) for d in items)
        cap = net.dc_nodes[v].storage_capacity
        if used > cap:
            bad("storage-capacity", (v,), f"{used} > {cap}")
    for d, item in items.items():
        total = sum(N(d, v) for v in safe)
        if total != item.size:
            bad("conservation", (d,), f"stored {total} != size {item.size}")
    load: dict[tuple[int, int], int] = defaultdict(int)
    for (d, nodes), b in plan.channels.items():
        if d in cand and nodes in cand[d]:
            for e in cand[d][nodes].links:
                load[e] += b
    for l in net.links:
        if load[l.endpoints] > l.capacity:
            bad("link-capacity", l.endpoints, f"{load[l.endpoints]} > {l.capacity}")
    for d in items:
        for v in safe:
            chosen = sum(U(d, p) for p in paths(d, v))
            limit = len(paths(d, v)) if instance.pn is None else instance.pn
            if chosen > limit:
                bad("path-count", (d, v), f"{chosen} > {limit}")
        n_dcs = sum(M(d, v) for v in safe)
        if n_dcs < 1:
            bad("min-dcs", (d,), "no backup DC selected")
        if n_dcs > instance.vn:
            bad("max-dcs", (d,), f"{n_dcs} > {instance.vn}")
        for p in paths(d):
            u, b = U(d, p), B(d, p)
            if 2 * u > M(d, p.destination) + 1:
                bad("path-destination", (d, p.nodes), "path used but destination not selected")
            if u > b:
                bad("path-use-lower", (d, p.nodes), f"U={u} > B={b}")
            if Fraction(b, lam) > u:
                bad("path-use-upper", (d, p.nodes), f"B/lambda={b}/{lam} > U={u}")
        for v in safe:
            m, n = M(d, v), N(d, v)
            if sum(U(d, p) for p in paths(d, v)) < m:
                bad("dc-path", (d, v), "DC selected without a selected path")
            if m > n:
                bad("dc-use-lower", (d, v), f"M={m} > N={n}")
            if Fraction(n, lam) > m:
                bad("dc-use-upper", (d, v), f"N/lambda={n}/{lam} > M={m}")
            if n > 0:
                bw = sum(B(d, p) for p in paths(d, v))
                if bw == 0 or Fraction(n, bw) > eps:
                    shown = "inf" if bw == 0 else str(Fraction(n, bw))
                    bad("backup-time", (d, v), f"{shown} > epsilon1={eps}")
    return out


# ---------------------------------------------------------------------------
# solving

def branch_priority(model: MILPModel, idx: VarIndex) -> list[int]:
    """DC selections first, then path selections, then amounts."""
    prio = [0] * model.num_vars
    for j in idx.M.values():
        prio[j] = 2
    for j in idx.U.values():
        prio[j] = 1
    return prio


@dataclass
class PlanOutcome:
    status: str
    plan: Optional[BackupPlan]
    result: SolveResult
    index: VarIndex
    build_time: float


def path_subset_incumbent(instance: Instance, model: MILPModel, idx: VarIndex,
                          x_root: Optional[np.ndarray] = None, k: int = 3,
                          node_limit: Optional[int] = 2000, method: str = "auto",
                          time_limit: Optional[float] = None) -> Optional[dict[int, int]]:
    """Best point found when each item keeps only a few candidate paths.

    Kept are the ``k`` cheapest paths per item and DC plus, given a root LP
    solution ``x_root``, every path it uses.  Any point of the restricted
    model is feasible for the full one, so its value is a valid cutoff.  The
    restricted model is searched depth first under ``node_limit``.  Returns
    ``None`` when nothing is found.
    """
    *_, lb, ub, _ = model.arrays()
    lb, ub = lb.copy(), ub.copy()
    for d in instance.data_items:
        ranked = sorted(range(len(d.candidate_paths)),
                        key=lambda k_: (d.candidate_paths[k_].path_cost, k_))
        seen: dict[int, int] = defaultdict(int)
        for kk in ranked:
            v = d.candidate_paths[kk].destination
            seen[v] += 1
            u, b = idx.U[d.id, kk], idx.B[d.id, kk]
            in_lp = x_root is not None and max(x_root[u], x_root[b]) > 1e-9
            if seen[v] > k and not in_lp:
                ub[u] = ub[b] = 0
    restricted = restrict(model, lb, ub)
    if restricted is None:
        return None
    sub, keep, fixed = restricted
    prio = np.array(branch_priority(model, idx))[keep]
    res = solve_bb(sub, time_limit=time_limit, node_limit=node_limit, method=method,
                   priority=prio, depth_first=True)
    if not res.values:
        return None
    x = fixed.copy()
    x[keep] = [res.values[j] for j in range(sub.num_vars)]
    return {j: int(round(v)) for j, v in enumerate(x)}


def solve_instance(instance: Instance, objective: str = MINCOST,
                   time_limit: Optional[float] = None, node_limit: Optional[int] = None,
                   method: str = "auto", linking: str = "tight",
                   prioritize: bool = True, strong: int = 8,
                   warm_paths: Optional[int] = 3,
                   dive_every: int = 50) -> PlanOutcome:
    """Build and solve one model.

    ``warm_paths`` seeds the exact search with :func:`path_subset_incumbent`
    (``None`` skips it).
    """
    start = time.perf_counter()
    build = build_backup_ilp if objective == MINCOST else build_maxbandwidth_ilp
    model, idx = build(instance, linking)
    built = time.perf_counter() - start
    deadline = None if time_limit is None else start + time_limit

    def heuristic(x_root):
        left = None if deadline is None else max(0.0, deadline - time.perf_counter())
        return path_subset_incumbent(instance, model, idx, x_root, warm_paths, method=method,
                                     time_limit=left)

    remaining = None if deadline is None else max(0.0, deadline - time.perf_counter())
    result = solve_bb(model, time_limit=remaining, node_limit=node_limit, method=method,
                      priority=branch_priority(model, idx) if prioritize else None,
                      strong=strong, heuristic=heuristic if warm_paths else None,
                      dive_every=dive_every)
    plan = extract_plan(instance, idx, result) if result.status == OPTIMAL else None
    return PlanOutcome(result.status, plan, result, idx, built)


# ---------------------------------------------------------------------------
# plan text format

def serialize_plan(plan: BackupPlan) -> str:
    out = [f"plan objective={plan.objective} status={plan.status}",
           f"storage_cost {plan.storage_cost}",
           f"transmission_cost {plan.transmission_cost}",
           f"total_cost {plan.total_cost}"]
    items = sorted({d for d, _ in plan.stored} | {d for d, _ in plan.channels}
                   | {d for d, _ in plan.used_dcs} | {d for d, _ in plan.used_paths})
    for d in items:
        out.append(f"item {d}")
        dcs = sorted({v for dd, v in plan.stored if dd == d} | {v for dd, v in plan.used_dcs
                                                                if dd == d})
        for v in dcs:
            out.append(f"  store {v} {plan.stored.get((d, v), 0)}")
        ps = sorted({p for dd, p in plan.channels if dd == d}
                    | {p for dd, p in plan.used_paths if dd == d})
        for p in ps:
            out.append(f"  path {'-'.join(map(str, p))} channels {plan.channels.get((d, p), 0)}")
        for v in dcs:
            t = plan.backup_time.get((d, v))
            if t is not None:
                out.append(f"  time {v} {t}")
    return "\n".join(out) + "\n"


class PlanFormatError(ValueError):
    pass


def parse_plan(text: str, instance: Instance) -> BackupPlan:
    """Read a plan file; listed entries count as selected, costs are recomputed.

    Cost lines that disagree with the recomputation are reported by
    :func:`stated_cost_mismatches`.
    """
    stored, channels = {}, {}
    used_dcs, used_paths = set(), set()
    header = {"objective": MINCOST, "status": OPTIMAL}
    stated = {}
    item = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "plan":
                header.update(t.split("=", 1) for t in tok[1:])
            elif tok[0] in ("storage_cost", "transmission_cost", "total_cost"):
                stated[tok[0]] = int(tok[1])
            elif tok[0] == "item":
                item = int(tok[1])
            elif tok[0] == "store":
                key = (item, int(tok[1]))
                stored[key] = int(tok[2])
                used_dcs.add(key)
            elif tok[0] == "path":
                if tok[2] != "channels":
                    raise ValueError("expected 'channels'")
                key = (item, tuple(int(x) for x in tok[1].split("-")))
                channels[key] = int(tok[3])
                used_paths.add(key)
            elif tok[0] == "time":
                pass
            else:
                raise ValueError(f"unknown directive {tok[0]!r}")
            if tok[0] in ("store", "path") and item is None:
                raise ValueError("entry before any item line")
        except (IndexError, ValueError) as exc:
            raise PlanFormatError(f"line {lineno}: {exc}") from None
    plan = make_plan(instance, stored, channels, used_dcs, used_paths,
                     header["objective"], header["status"])
    plan.stated_costs = stated
    return plan


def stated_cost_mismatches(plan: BackupPlan) -> list[PlanViolation]:
    stated = plan.stated_costs
    actual = {"storage_cost": plan.storage_cost, "transmission_cost": plan.transmission_cost,
              "total_cost": plan.total_cost}
    return [PlanViolation("stated-cost", (k,), f"file says {v}, recomputed {actual[k]}")
            for k, v in sorted(stated.items()) if actual[k] != v]
