"""Large scenario: ten safe DCs, epsilon1 = 60, growing |D| until solves time out.

Shows how solve time scales; cells that hit the limit are reported as
bound-exceeded rather than failing.

    python scripts/fig7_stress.py --sweep-d 5,10 --time-limit 120
"""

import argparse
import sys

from dcbackup.cli import int_list
from dcbackup.harness import format_csv, large_scale_config, run_experiment


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sweep-d", type=int_list, default=(5, 10, 15, 20))
    ap.add_argument("--seeds", type=int_list, default=(1,))
    ap.add_argument("--time-limit", type=float, default=600.0)
    ap.add_argument("--max-hops", type=int, default=None)
    ap.add_argument("--output", default="fig7.csv")
    args = ap.parse_args(argv)
    cfg = large_scale_config(d_counts=args.sweep_d, seeds=args.seeds,
                             time_limit=args.time_limit, max_hops=args.max_hops)
    rows = run_experiment(cfg, lambda r: print(
        f"|D|={r.d_count}: {r.status_mincost} {r.cost_mincost} in {r.solve_time_s:.1f}s "
        f"({r.bb_nodes} nodes)", file=sys.stderr))
    with open(args.output, "w") as fh:
        fh.write(format_csv(rows))


if __name__ == "__main__":
    main()
