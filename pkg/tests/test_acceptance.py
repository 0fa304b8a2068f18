"""Acceptance gate: one test per primary criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines; the
InternetMCI campaign (criterion 3) can take more than an hour on one CPU
since every min-cost cell may use its full 10-minute limit.
"""

import time
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from dcbackup.harness import (
    ScenarioConfig, format_csv, generate_instance, random_instance, run_experiment,
    tiny_instance,
)
from dcbackup.milp import (
    BOUND_EXCEEDED, INFEASIBLE, OPTIMAL, solve_bb, solve_exhaustive, solve_lp_relaxation,
)
from dcbackup.netmodel import builtin_internetmci
from dcbackup.planner import (
    MAXBW, MINCOST, build_backup_ilp, build_maxbandwidth_ilp, serialize_plan, solve_instance,
    validate_plan,
)

from test_milp import random_model, vertex_enumeration
from test_netmodel import table_i

CELL_LIMIT = 600.0


RESULTS: list[str] = []  # echoed in the terminal summary by conftest


def report(number: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}: {name}"
    if detail:
        line += f" ({detail})"
    RESULTS.append(line)
    print("\n" + line)
    assert ok, detail


def test_c1_oracle_equivalence():
    start = time.perf_counter()
    compared = mismatches = 0
    for seed in range(100):
        inst = tiny_instance(seed)
        assert len(inst.network.nodes) <= 4 and len(inst.data_items) <= 2
        for build in (build_backup_ilp, build_maxbandwidth_ilp):
            model, _ = build(inst)
            ex, bb = solve_exhaustive(model), solve_bb(model)
            compared += 1
            if (ex.status, ex.objective_value) != (bb.status, bb.objective_value):
                mismatches += 1
    elapsed = time.perf_counter() - start
    report(1, "solve_bb equals solve_exhaustive on tiny instances",
           mismatches == 0 and elapsed < 300,
           f"{compared} models from 100 instances, {mismatches} mismatches, {elapsed:.1f}s")


def test_c2_feasibility_audit():
    plans = bad = 0
    for seed in range(50):
        inst = random_instance(1000 + seed, num_nodes=7, num_items=3, num_safe=3, max_hops=4)
        for objective in (MINCOST, MAXBW):
            out = solve_instance(inst, objective)
            if out.status == OPTIMAL:
                plans += 1
                bad += bool(validate_plan(inst, out.plan))
    report(2, "validate_plan finds nothing wrong in optimal plans", bad == 0 and plans >= 50,
           f"{plans} optimal plans checked, {bad} with violations")


def test_c3_baseline_dominance():
    cfg = ScenarioConfig(d_counts=(5, 10, 15, 20), epsilon1s=(70,), seeds=(1, 2, 3),
                         time_limit=CELL_LIMIT)
    assert cfg.vn is None and cfg.safe == (9, 12, 14, 18)  # VN defaults to |safe| = 4
    lines, reductions, ok = [], [], True
    for r in run_experiment(cfg):
        both = r.status_mincost == OPTIMAL and r.status_maxbw == OPTIMAL
        if both:
            ok &= r.cost_mincost < r.cost_maxbw
            reductions.append(r.reduction)
        else:
            # a cell that does not prove optimality must have stopped at its limit
            ok &= all(s in (OPTIMAL, BOUND_EXCEEDED) for s in (r.status_mincost, r.status_maxbw))
            ok &= r.solve_time_s <= CELL_LIMIT + 30
        red = "" if r.reduction is None else f"{100 * r.reduction:.1f}%"
        lines.append(f"  |D|={r.d_count:2d} seed={r.seed}: mincost {r.status_mincost} "
                     f"{r.cost_mincost} maxbw {r.status_maxbw} {r.cost_maxbw} reduction {red} "
                     f"time {r.solve_time_s:.1f}s")
    print("\n" + "\n".join(lines))
    RESULTS.extend(lines)
    band = (f"reductions {min(reductions):.1%}..{max(reductions):.1%} over {len(reductions)} "
            "optimal cells, reference band 63%..89%") if reductions else "no optimal cells"
    report(3, "min-cost beats MaxBandwidthU on InternetMCI", ok and bool(reductions), band)


# Below 68 this instance's min-cost solves stop at the limit: the LP relaxation
# prorates per-path fixed charges and leaves a 4-10% gap (see the ledger).
# At 68 one item (size 69) needs two channels, so the cost does move.
C4_EPSILONS = (68, 69, 70, 75, 80)


def test_c4_epsilon_monotonicity():
    inst = generate_instance(ScenarioConfig(), 10, 1)
    costs = {}
    for eps in C4_EPSILONS:
        out = solve_instance(replace(inst, epsilon1=eps), time_limit=CELL_LIMIT)
        if out.status == OPTIMAL:
            costs[eps] = out.plan.total_cost
    seq = [costs[e] for e in sorted(costs)]
    ok = len(seq) >= 5 and all(a >= b for a, b in zip(seq, seq[1:]))
    report(4, "optimal cost non-increasing in epsilon1", ok,
           ", ".join(f"{e}:{c}" for e, c in sorted(costs.items())))


def test_c5_table_i():
    net = builtin_internetmci()
    expected = table_i()
    wrong = [(u, v) for (u, v), c in expected.items()
             if not net.has_link(u, v) or net.link(u, v).cost != c]
    ok = (len(expected) == 33 and not wrong and {l.endpoints for l in net.links} == set(expected)
          and net.nodes == tuple(range(19)) and set(net.dc_nodes) == {3, 9, 12, 14, 18})
    report(5, "InternetMCI matches the published link costs and node/DC sets", ok,
           f"{33 - len(wrong)}/33 link costs match")


def test_c6_determinism():
    cfg = ScenarioConfig(d_counts=(5,), seeds=(1, 2), record_timing=False,
                         time_limit=CELL_LIMIT)

    def campaign():
        rows = run_experiment(cfg)
        files = [serialize_plan(p) for r in rows for p in (r.plan_mincost, r.plan_maxbw)
                 if p is not None]
        return format_csv(rows, record_timing=False), files

    (csv1, plans1), (csv2, plans2) = campaign(), campaign()
    ok = csv1 == csv2 and plans1 == plans2 and len(plans1) == 4
    report(6, "campaign CSV and plan files are byte-identical", ok,
           f"{len(csv1)} CSV bytes, {len(plans1)} plan files")


def test_c7_lp_correctness():
    rng = np.random.default_rng(7)
    checked, worst = 0, 0.0
    for _ in range(25):
        n = int(rng.integers(2, 9))
        model = random_model(rng, n, int(rng.integers(1, 5 if n > 6 else 7)), integer=False)
        expected = vertex_enumeration(model)
        out = solve_lp_relaxation(model, method="simplex")
        if out.status != OPTIMAL or expected is None:
            worst = float("inf")
        else:
            worst = max(worst, abs(out.objective_value - expected))
        checked += 1
    report(7, "simplex matches vertex enumeration", worst <= 1e-6 and checked >= 20,
           f"{checked} LPs, max error {worst:.2e}")


def test_c8_infeasibility_detection():
    cases = []
    base = generate_instance(ScenarioConfig(), 1, 1)
    net, size = base.network, base.data_items[0].size
    cut = sum(l.capacity for l in net.links if base.affected_dc in l.endpoints)
    ratio = Fraction(size, cut)
    for eps in (ratio * Fraction(999, 1000), ratio - Fraction(1, 10**6)):
        inst = replace(base, epsilon1=eps)
        cases.append((eps, solve_instance(inst).status, solve_instance(inst, MAXBW).status))
    ok = all(s == INFEASIBLE and t == INFEASIBLE for _, s, t in cases)
    report(8, "epsilon1 below C_d / cut capacity is infeasible", ok,
           f"C_d={size}, cut={cut}, statuses {[s for _, s, _ in cases]}")
