"""Reference scenarios (mbb K=6 and mtc K=3600, M=128) under both power normalizations."""

import argparse

from cfmimo_ofdm import SimConfig, run_experiment
from cfmimo_ofdm.harness import summarize

REFERENCE = {"mbb": (28.20, 46.45, 273.70), "mtc": (0.057, 0.206, 721.23)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--drops", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    print(f"{'scenario':8s} {'normalization':15s} {'95%-likely':>11s} {'median':>9s} {'sum':>9s}  [Mbps]")
    for name, K in (("mbb", 6), ("mtc", 3600)):
        print(f"{name:8s} {'reference':15s} " + " ".join(f"{v:>9.3f}" for v in REFERENCE[name]))
        for norm in ("per_subcarrier", "total_split"):
            cfg = SimConfig(M=128, K=K, allocation=name, drops=args.drops, seed=args.seed,
                            power_normalization=norm)
            s = summarize(run_experiment(cfg), cfg)
            vals = (s["p95_likely_bps"], s["median_bps"], s["sum_bps"])
            print(f"{name:8s} {norm:15s} " + " ".join(f"{v / 1e6:>9.3f}" for v in vals))


if __name__ == "__main__":
    main()
