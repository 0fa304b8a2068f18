from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dcbackup.milp import (
    BOUND_EXCEEDED, EQ, GE, INFEASIBLE, LE, MAX, MIN, OPTIMAL, DomainTooLarge, MILPModel,
    ModelError, simplex, solve_bb, solve_exhaustive, solve_lp_relaxation,
)


def vertex_enumeration(model):
    """Best objective over all basic points (n active rows/bounds), or None."""
    c, A, senses, b, lb, ub, _ = model.arrays()
    A = A.toarray()
    n = len(c)
    rows = [(A[i], b[i]) for i in range(len(b))]
    rows += [(np.eye(n)[j], lb[j]) for j in range(n)] + [(np.eye(n)[j], ub[j]) for j in range(n)]
    G = np.array([r for r, _ in rows])
    h = np.array([v for _, v in rows])
    best = None
    combos = np.array(list(combinations(range(len(rows)), n)))
    for chunk in np.array_split(combos, max(1, len(combos) // 20000)):
        M = G[chunk]
        ok = np.abs(np.linalg.det(M)) > 1e-9
        if not ok.any():
            continue
        X = np.linalg.solve(M[ok], h[chunk[ok]][..., None])[..., 0]
        feas = np.all(X >= lb - 1e-7, axis=1) & np.all(X <= ub + 1e-7, axis=1)
        AX = X @ A.T
        for i, s in enumerate(senses):
            if s == LE:
                feas &= AX[:, i] <= b[i] + 1e-7
            elif s == GE:
                feas &= AX[:, i] >= b[i] - 1e-7
            else:
                feas &= np.abs(AX[:, i] - b[i]) <= 1e-7
        if feas.any():
            v = (X[feas] @ c).min()
            best = v if best is None else min(best, v)
    if best is None:
        return None
    return -best if model.sense == MAX else best


def random_model(rng, n_vars, n_rows, integer, bound=5, feasible=True):
    m = MILPModel("random")
    lbs = rng.integers(-2, 2, size=n_vars)
    ubs = lbs + rng.integers(0, bound + 1, size=n_vars)
    xs = [m.add_var(f"x{j}", int(lbs[j]), int(ubs[j]), integer) for j in range(n_vars)]
    x0 = rng.integers(lbs, ubs + 1)
    for _ in range(n_rows):
        a = rng.integers(-4, 5, size=n_vars)
        lhs = int(a @ x0)
        sense = rng.choice([LE, GE, EQ], p=[0.45, 0.45, 0.1])
        slack = int(rng.integers(0, 4))
        rhs = {LE: lhs + slack, GE: lhs - slack, EQ: lhs}[sense]
        if not feasible:
            rhs += int(rng.integers(-6, 7))
        m.add_constraint({xs[j]: int(a[j]) for j in range(n_vars)}, sense, rhs)
    sense = MIN if rng.random() < 0.5 else MAX
    m.set_objective(sense, {xs[j]: int(v) for j, v in enumerate(rng.integers(-5, 6, size=n_vars))})
    return m


def test_lp_single_bound():
    m = MILPModel()
    x = m.add_var("x", 0, 10, integer=False)
    m.add_constraint({x: 1}, GE, 3)
    m.set_objective(MIN, {x: 1})
    r = solve_lp_relaxation(m)
    assert r.status == OPTIMAL
    assert r.values[x] == pytest.approx(3)
    assert r.objective_value == pytest.approx(3)


def test_lp_max_sum():
    m = MILPModel()
    x = m.add_var("x", 0, 1, integer=False)
    y = m.add_var("y", 0, 1, integer=False)
    m.add_constraint({x: 1, y: 1}, LE, 1)
    m.set_objective(MAX, {x: 1, y: 1})
    assert solve_lp_relaxation(m).objective_value == pytest.approx(1)


def test_lp_infeasible():
    m = MILPModel()
    x = m.add_var("x", 0, 5, integer=False)
    m.add_constraint({x: 1}, GE, 6)
    assert solve_lp_relaxation(m).status == INFEASIBLE


@pytest.mark.parametrize("bland_after", [1, 1000])
def test_beale_cycling_example_terminates(bland_after):
    c = np.array([-0.75, 20, -0.5, 6])
    A = np.array([[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]])
    out = simplex(c, A, [LE, LE, LE], np.array([0, 0, 1.0]), np.zeros(4), np.full(4, 100.0),
                  bland_after=bland_after)
    assert out.status == OPTIMAL
    assert out.objective == pytest.approx(-1.25)


def test_simplex_matches_vertex_enumeration_20_random():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 20:
        n = int(rng.integers(2, 9))
        rows = int(rng.integers(1, 5 if n > 6 else 7))
        m = random_model(rng, n, rows, integer=False)
        expected = vertex_enumeration(m)
        r = solve_lp_relaxation(m, method="simplex")
        assert r.status == OPTIMAL
        assert r.objective_value == pytest.approx(expected, abs=1e-6)
        assert not m.violations(r.values)
        checked += 1


def test_simplex_and_highs_agree():
    rng = np.random.default_rng(11)
    for _ in range(30):
        m = random_model(rng, int(rng.integers(2, 10)), int(rng.integers(1, 8)), False,
                         feasible=bool(rng.random() < 0.7))
        a = solve_lp_relaxation(m, method="simplex")
        b = solve_lp_relaxation(m, method="highs")
        assert a.status == b.status
        if a.status == OPTIMAL:
            assert a.objective_value == pytest.approx(b.objective_value, abs=1e-6)


def test_bb_integral_root_needs_no_branching():
    m = MILPModel()
    x = m.add_var("x", 0, 4)
    y = m.add_var("y", 0, 4)
    m.add_constraint({x: 1, y: 1}, LE, 5)
    m.set_objective(MAX, {x: 2, y: 1})
    lp = solve_lp_relaxation(m)
    r = solve_bb(m)
    assert r.status == OPTIMAL
    assert r.stats.branches == 0
    assert r.objective_value == lp.objective_value == 9


def test_bb_rounds_up():
    m = MILPModel()
    x = m.add_var("x", 0, 10)
    m.add_constraint({x: 1}, GE, 2.5)
    m.set_objective(MIN, {x: 1})
    r = solve_bb(m)
    assert r.status == OPTIMAL and r.values[x] == 3 and r.objective_value == 3
    assert isinstance(r.values[x], int)
    assert r.exact_check is True


def test_exhaustive_examples():
    m = MILPModel()
    x = m.add_var("x", 0, 3)
    m.add_constraint({x: 1}, GE, 2)
    m.set_objective(MIN, {x: 1})
    r = solve_exhaustive(m)
    assert r.status == OPTIMAL and r.values[x] == 2

    m = MILPModel()
    x = m.add_var("x", 0, 3)
    m.add_constraint({x: 1}, LE, 0)
    m.add_constraint({x: 1}, GE, 1)
    assert solve_exhaustive(m).status == INFEASIBLE
    assert solve_bb(m).status == INFEASIBLE


def test_exhaustive_refuses_big_domains_and_continuous():
    m = MILPModel()
    for j in range(8):
        m.add_var(f"x{j}", 0, 9)
    with pytest.raises(DomainTooLarge):
        solve_exhaustive(m)
    m = MILPModel()
    m.add_var("x", 0, 1, integer=False)
    with pytest.raises(ValueError):
        solve_exhaustive(m)


def test_model_rejects_bad_input():
    m = MILPModel()
    with pytest.raises(ModelError):
        m.add_var("x", 0, float("inf"))
    with pytest.raises(ModelError):
        m.add_var("x", 2, 1)
    x = m.add_var("x", 0, 1)
    with pytest.raises(ModelError):
        m.add_var("x", 0, 1)
    with pytest.raises(ModelError):
        m.add_constraint({x + 1: 1}, LE, 0)
    with pytest.raises(ModelError):
        m.add_constraint({x: 1}, "<", 0)
    with pytest.raises(ModelError):
        m.set_objective(MIN, {5: 1})


def test_empty_constraint_is_dropped_or_infeasible():
    m = MILPModel()
    x = m.add_var("x", 0, 2)
    m.add_constraint({}, LE, 0)
    m.set_objective(MAX, {x: 1})
    assert solve_bb(m).objective_value == 2
    m.add_constraint({}, GE, 1)
    assert solve_bb(m).status == INFEASIBLE


def test_bb_matches_exhaustive_100_random():
    rng = np.random.default_rng(2024)
    statuses = set()
    for _ in range(100):
        m = random_model(rng, int(rng.integers(1, 7)), int(rng.integers(1, 5)), True,
                         feasible=bool(rng.random() < 0.8))
        ex = solve_exhaustive(m)
        bb = solve_bb(m)
        statuses.add(ex.status)
        assert bb.status == ex.status
        if ex.status == OPTIMAL:
            assert bb.objective_value == ex.objective_value
            assert bb.exact_check
            assert not m.violations(bb.values, exact=True)
    assert statuses == {OPTIMAL, INFEASIBLE}


@st.composite
def tiny_milps(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return random_model(rng, draw(st.integers(1, 5)), draw(st.integers(1, 4)), True,
                        feasible=draw(st.booleans()))


@settings(max_examples=60, deadline=None)
@given(tiny_milps())
def test_bb_equals_exhaustive_property(m):
    ex = solve_exhaustive(m)
    bb = solve_bb(m)
    assert bb.status == ex.status
    if ex.status == OPTIMAL:
        assert bb.objective_value == ex.objective_value


@settings(max_examples=60, deadline=None)
@given(tiny_milps())
def test_lp_relaxation_bounds_every_integral_point(m):
    lp = solve_lp_relaxation(m)
    ex = solve_exhaustive(m)
    if ex.status != OPTIMAL:
        return
    assert lp.status == OPTIMAL
    if m.sense == MIN:
        assert lp.objective_value <= ex.objective_value + 1e-6
    else:
        assert lp.objective_value >= ex.objective_value - 1e-6


def test_bb_is_deterministic():
    rng = np.random.default_rng(5)
    for _ in range(10):
        m = random_model(rng, 6, 4, True)
        a, b = solve_bb(m), solve_bb(m)
        assert (a.status, a.values, a.objective_value) == (b.status, b.values, b.objective_value)
        assert (a.stats.nodes, a.stats.branches, a.stats.lp_iterations) == \
            (b.stats.nodes, b.stats.branches, b.stats.lp_iterations)


def knapsack():
    m = MILPModel("knap")
    w = [5, 7, 4, 3, 9, 6, 8]
    p = [9, 12, 7, 5, 14, 10, 13]
    xs = [m.add_var(f"x{j}", 0, 1) for j in range(len(w))]
    m.add_constraint({x: wi for x, wi in zip(xs, w)}, LE, 20)
    m.set_objective(MAX, {x: pi for x, pi in zip(xs, p)})
    return m


def test_node_limit_reports_bound_exceeded_with_gap():
    m = knapsack()
    r = solve_bb(m, node_limit=1)
    assert r.status == BOUND_EXCEEDED
    assert r.best_bound is not None
    full = solve_bb(m)
    assert full.status == OPTIMAL
    assert full.objective_value == solve_exhaustive(m).objective_value
    assert r.best_bound >= full.objective_value - 1e-9


def test_priority_changes_order_not_answer():
    m = knapsack()
    plain = solve_bb(m)
    prio = solve_bb(m, priority=list(range(m.num_vars)))
    assert plain.objective_value == prio.objective_value


def test_lp_format_round_trip_through_highs(tmp_path):
    highspy = pytest.importorskip("highspy")
    m = knapsack()
    path = tmp_path / "knap.lp"
    path.write_text(m.to_lp_format())
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    assert h.getInfo().objective_function_value == pytest.approx(solve_bb(m).objective_value)


def test_exact_violation_check_uses_rationals():
    m = MILPModel()
    x = m.add_var("x", 0, 1, integer=False)
    m.add_constraint({x: 3}, LE, 1)
    assert m.violations({x: Fraction(1, 3)}, exact=True) == []
    assert m.violations({x: Fraction(1, 3) + Fraction(1, 10**12)}, exact=True)


# ---------------------------------------------------------------------------
# presolve pieces: every integral point that matters must survive

from itertools import product  # noqa: E402

from dcbackup.milp import make_lp, propagate_bounds, reduced_cost_bounds, restrict  # noqa: E402


def integral_points(model):
    """Feasible integral points and their (minimisation form) objective values."""
    c, A, senses, b, lb, ub, _ = model.arrays()
    A = A.toarray()
    out = []
    for x in product(*(range(int(l), int(u) + 1) for l, u in zip(lb, ub))):
        x = np.array(x, dtype=float)
        act = A @ x
        ok = all((s == LE and a <= r) or (s == GE and a >= r) or (s == EQ and a == r)
                 for s, a, r in zip(senses, act, b))
        if ok:
            out.append((x, float(c @ x)))
    return out


def test_simplex_with_no_variables():
    assert simplex([], np.zeros((0, 0)), [], [], [], []).status == OPTIMAL
    assert simplex([], np.zeros((1, 0)), [GE], [1], [], []).status == INFEASIBLE


@pytest.mark.parametrize("seed", range(25))
def test_propagation_keeps_every_integral_point(seed):
    rng = np.random.default_rng(seed)
    model = random_model(rng, 4, 3, True, feasible=seed % 3 != 0)
    *_, lb, ub, _ = model.arrays()
    points = integral_points(model)
    tight = propagate_bounds(model, lb, ub)
    if tight is None:
        assert points == []
        return
    nlb, nub = tight
    assert np.all(nlb >= lb) and np.all(nub <= ub)
    for x, _ in points:
        assert np.all(x >= nlb - 1e-9) and np.all(x <= nub + 1e-9)


@pytest.mark.parametrize("seed", range(25))
def test_reduced_cost_fixing_keeps_optimum(seed):
    rng = np.random.default_rng(100 + seed)
    model = random_model(rng, 4, 3, True)
    *_, lb, ub, _ = model.arrays()
    points = integral_points(model)
    best = min(v for _, v in points)
    root = make_lp(model, "highs").solve(lb.copy(), ub.copy())
    # an incumbent one above the optimum must still let the optimum through
    nlb, nub = reduced_cost_bounds(model, root, lb, ub, best + 1)
    kept = [x for x, v in points if v == best and np.all(x >= nlb) and np.all(x <= nub)]
    assert kept


@pytest.mark.parametrize("seed", range(25))
def test_restricted_model_has_same_optimum(seed):
    rng = np.random.default_rng(200 + seed)
    model = random_model(rng, 5, 3, True)
    c, *_, lb, ub, _ = model.arrays()
    points = integral_points(model)
    best = min(v for _, v in points)
    x_best = next(x for x, v in points if v == best)
    # fix two coordinates at the optimum, as reduced-cost fixing would
    lb, ub = lb.copy(), ub.copy()
    lb[:2] = ub[:2] = x_best[:2]
    sub, keep, fixed = restrict(model, lb, ub)
    sub_best = min((v for _, v in integral_points(sub)), default=None) if sub.num_vars else 0.0
    assert sub_best + float(c @ fixed) == best
    assert set(keep) <= set(range(2, 5))
