"""Per-user rate CDFs on a single RB as the number of co-scheduled users grows."""

import argparse
from pathlib import Path

from cfmimo_ofdm import SimConfig, run_experiment
from cfmimo_ofdm.harness import summarize, write_cdf


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=128)
    ap.add_argument("--users", type=int, nargs="+", default=[6, 12, 24, 36])
    ap.add_argument("--drops", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--normalization", default="total_split")
    ap.add_argument("--out", type=Path, default=Path("results/user_load"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    print(f"{'K':>4s} {'95%-likely':>11s} {'median':>9s} {'sum':>9s}  [kbps]")
    for K in args.users:
        cfg = SimConfig(M=args.M, K=K, allocation="custom", group_sizes=[K], rb_assignment={0: [1]},
                        drops=args.drops, seed=args.seed, power_normalization=args.normalization)
        report = run_experiment(cfg)
        s = summarize(report, cfg)
        write_cdf(report.rates, args.out / f"cdf_K{K}.csv")
        print(f"{K:>4d} {s['p95_likely_bps'] / 1e3:>11.1f} {s['median_bps'] / 1e3:>9.1f} "
              f"{s['sum_bps'] / 1e3:>9.1f}")


if __name__ == "__main__":
    main()
