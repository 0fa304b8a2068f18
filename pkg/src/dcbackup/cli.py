"""Command line entry point: ``dcbackup {plan,experiment,validate,paths}``.

Exit codes: 0 success, 1 plan violations found by ``validate``, 2 usage or
input error, 3 the instance is infeasible, 4 a solver limit stopped ``plan``
before optimality was proven.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path as FsPath

from .harness import ConfigError, ScenarioConfig, format_csv, generate_instance, run_experiment
from .milp import INFEASIBLE, OPTIMAL
from .netmodel import TopologyError, load_topology, parse_instance, serialize_instance
from .pathgen import build_candidate_sets, format_candidate_sets
from .planner import (
    MAXBW, MINCOST, InstanceInvalid, PlanFormatError, parse_plan, serialize_plan,
    solve_instance, stated_cost_mismatches, validate_plan,
)

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_LIMIT = 0, 1, 2, 3, 4


def int_list(text: str) -> tuple[int, ...]:
    """``"1,2,5"`` or an inclusive range ``"1..5"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return tuple(out)


def number_list(text: str) -> tuple:
    vals = []
    for part in text.split(","):
        f = Fraction(part.strip())
        vals.append(int(f) if f.denominator == 1 else f)
    return tuple(vals)


def _scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--topology", default="builtin:internetmci",
                   help="builtin:internetmci or a topology file")
    p.add_argument("--affected", type=int, default=3)
    p.add_argument("--safe", type=int_list, default=(9, 12, 14, 18))
    p.add_argument("--epsilon1", type=number_list, default=(70,),
                   help="backup time limit in seconds (comma list for experiment)")
    p.add_argument("--pn", type=int, default=None, help="max paths per item and DC")
    p.add_argument("--vn", type=int, default=None, help="max DCs per item")
    p.add_argument("--lambda", dest="lam", type=int, default=10000,
                   help="big-M constant (0 selects 1 + largest capacity)")
    p.add_argument("--max-hops", type=int, default=None)
    p.add_argument("--time-limit", type=float, default=600.0,
                   help="seconds per solve (0 for none)")
    p.add_argument("--extra-dcs", type=int_list, default=(),
                   help="nodes promoted to data centers")


def _config(args, **extra) -> ScenarioConfig:
    return ScenarioConfig(
        topology=args.topology, affected=args.affected, safe=args.safe,
        epsilon1s=args.epsilon1, pn=args.pn, vn=args.vn, lam=args.lam or None,
        max_hops=args.max_hops, extra_dcs=args.extra_dcs,
        time_limit=args.time_limit or None, **extra)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcbackup",
                                     description="Disaster backup planning for DC networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve one instance and write a plan file")
    _scenario_args(p)
    p.add_argument("--instance", help="read this instance file instead of generating one")
    p.add_argument("--num-data", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--objective", choices=(MINCOST, MAXBW), default=MINCOST)
    p.add_argument("--output", default="plan.txt", help="plan file path")
    p.add_argument("--instance-output", default=None,
                   help="instance file path (default: <output>.instance)")

    p = sub.add_parser("experiment", help="run a campaign and write CSV")
    _scenario_args(p)
    p.add_argument("--sweep-d", type=int_list, default=(5, 10, 15, 20))
    p.add_argument("--seeds", type=int_list, default=(1,))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true",
                   help="leave solve_time_s empty so the CSV is byte-reproducible")
    p.add_argument("--plans-dir", default=None, help="also write every plan file here")
    p.add_argument("--output", default="-", help="CSV path, - for stdout")

    p = sub.add_parser("validate", help="check a plan file against an instance file")
    p.add_argument("instance")
    p.add_argument("plan")

    p = sub.add_parser("paths", help="print the candidate path sets")
    p.add_argument("--topology", default="builtin:internetmci")
    p.add_argument("--affected", type=int, default=3)
    p.add_argument("--safe", type=int_list, default=(9, 12, 14, 18))
    p.add_argument("--max-hops", type=int, default=None)
    return parser


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        FsPath(path).write_text(text)


def cmd_plan(args) -> int:
    if args.instance:
        instance = parse_instance(FsPath(args.instance).read_text())
    else:
        cfg = _config(args)
        instance = generate_instance(cfg, args.num_data, args.seed, args.epsilon1[0])
    out = solve_instance(instance, args.objective, time_limit=args.time_limit or None)
    inst_path = args.instance_output or f"{args.output}.instance"
    if not args.instance:
        _write(inst_path, serialize_instance(instance))
    stats = out.result.stats
    if out.status == INFEASIBLE:
        print(f"infeasible: no plan meets epsilon1={instance.epsilon1}")
        return EXIT_INFEASIBLE
    if out.status != OPTIMAL or out.plan is None:
        print(f"status {out.status}: best bound {out.result.best_bound}, "
              f"incumbent {out.result.objective_value}, nodes {stats.nodes}")
        return EXIT_LIMIT
    plan = out.plan
    _write(args.output, serialize_plan(plan))
    print(f"status {out.status} objective {args.objective}")
    print(f"storage_cost {plan.storage_cost} transmission_cost {plan.transmission_cost} "
          f"total_cost {plan.total_cost}")
    print(f"solve_time_s {stats.wall_time:.3f} nodes {stats.nodes}")
    if args.output != "-":
        print(f"plan written to {args.output}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = _config(args, d_counts=args.sweep_d, seeds=args.seeds, workers=args.workers,
                  record_timing=not args.no_timing)

    def progress(r):
        print(f"|D|={r.d_count} eps={r.epsilon1} seed={r.seed}: {r.status_mincost} "
              f"{r.cost_mincost} vs {r.status_maxbw} {r.cost_maxbw}", file=sys.stderr)

    results = run_experiment(cfg, progress)
    _write(args.output, format_csv(results, cfg.record_timing))
    if args.plans_dir:
        root = FsPath(args.plans_dir)
        root.mkdir(parents=True, exist_ok=True)
        for r in results:
            stem = f"d{r.d_count}_eps{r.epsilon1}_seed{r.seed}".replace("/", "_")
            for tag, plan in ((MINCOST, r.plan_mincost), (MAXBW, r.plan_maxbw)):
                if plan is not None:
                    (root / f"{stem}_{tag}.plan").write_text(serialize_plan(plan))
    return EXIT_OK


def cmd_validate(args) -> int:
    instance = parse_instance(FsPath(args.instance).read_text())
    plan = parse_plan(FsPath(args.plan).read_text(), instance)
    found = validate_plan(instance, plan) + stated_cost_mismatches(plan)
    for v in found:
        print(f"{v.constraint} {v.key}: {v.detail}")
    if found:
        print(f"{len(found)} violation(s)")
        return EXIT_VIOLATIONS
    print(f"ok: total_cost {plan.total_cost}")
    return EXIT_OK


def cmd_paths(args) -> int:
    network = load_topology(args.topology)
    cands = build_candidate_sets(network, args.affected, args.safe, args.max_hops)
    sys.stdout.write(format_candidate_sets(cands))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"plan": cmd_plan, "experiment": cmd_experiment, "validate": cmd_validate,
               "paths": cmd_paths}[args.command]
    try:
        return handler(args)
    except (ConfigError, TopologyError, InstanceInvalid, PlanFormatError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
