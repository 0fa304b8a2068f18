"""Cost versus backup-time limit epsilon1 at a fixed |D| and seed.

    python scripts/run_fig5.py --num-data 10 --seed 1 --output fig5.csv
"""

import argparse
import sys
from dataclasses import replace

from dcbackup.cli import int_list, number_list
from dcbackup.harness import ScenarioConfig, format_csv, run_experiment


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--num-data", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--epsilon1", type=number_list, default=(55, 60, 65, 70, 75, 80))
    ap.add_argument("--time-limit", type=float, default=600.0)
    ap.add_argument("--output", default="fig5.csv")
    args = ap.parse_args(argv)
    cfg = replace(ScenarioConfig(), d_counts=(args.num_data,), seeds=(args.seed,),
                  epsilon1s=args.epsilon1, time_limit=args.time_limit)
    rows = run_experiment(cfg, lambda r: print(
        f"eps1={r.epsilon1}: {r.status_mincost} {r.cost_mincost}", file=sys.stderr))
    with open(args.output, "w") as fh:
        fh.write(format_csv(rows))
    costs = [r.cost_mincost for r in rows if r.status_mincost == "optimal"]
    print("non-increasing:", all(a >= b for a, b in zip(costs, costs[1:])))


if __name__ == "__main__":
    main()
