"""Fixed antenna budget split into APs with N_t antennas each, single RB."""

import argparse
from pathlib import Path

from cfmimo_ofdm import SimConfig, run_experiment
from cfmimo_ofdm.harness import summarize, write_cdf


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=256)
    ap.add_argument("--users", type=int, default=12)
    ap.add_argument("--nt", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    ap.add_argument("--drops", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--normalization", default="total_split")
    ap.add_argument("--out", type=Path, default=Path("results/ap_antennas"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    print(f"{'N_t':>4s} {'N_AP':>5s} {'95%-likely':>11s} {'median':>9s} {'sum':>9s}  [kbps]")
    for n_t in args.nt:
        cfg = SimConfig(M=args.M, N_t=n_t, K=args.users, allocation="custom",
                        group_sizes=[args.users], rb_assignment={0: [1]}, drops=args.drops,
                        seed=args.seed, power_normalization=args.normalization)
        report = run_experiment(cfg)
        s = summarize(report, cfg)
        write_cdf(report.rates, args.out / f"cdf_Nt{n_t}.csv")
        print(f"{n_t:>4d} {cfg.N_AP:>5d} {s['p95_likely_bps'] / 1e3:>11.1f} "
              f"{s['median_bps'] / 1e3:>9.1f} {s['sum_bps'] / 1e3:>9.1f}")


if __name__ == "__main__":
    main()
