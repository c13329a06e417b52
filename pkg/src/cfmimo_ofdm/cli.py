"""Command-line entry point: ``simulate`` and ``validate``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .config import ConfigError, load_config, validate
from .harness import drop_rng, format_table, run_experiment, write_outputs
from .geometry import drop_geometry


def _dump_geometry(cfg, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["drop", "entity", "index", "x", "y"])
        for d in range(cfg.drops):
            state = drop_geometry(cfg, drop_rng(cfg.seed, d))
            for name, pts in (("ap", state.ap_positions), ("user", state.user_positions)):
                for i, (x, y) in enumerate(pts):
                    w.writerow([d, name, i, repr(float(x)), repr(float(y))])


def _dump_sinr(report, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["drop", "user", "rb", "gamma", "desired", "mui_err", "noise"])
        for d in range(report.gamma.shape[0]):
            for k in range(report.gamma.shape[1]):
                row = [repr(float(report.gamma[d, k])), repr(float(report.desired[d, k])),
                       repr(float(report.interference[d, k])), repr(float(report.noise))]
                for r in report.rb_sets.get(int(report.group_of[k]), []):
                    w.writerow([d, k, r] + row)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfmimo-ofdm",
                                     description="Cell-free massive MIMO-OFDM rate simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run Monte Carlo drops and write rates/CDF/summary")
    sim.add_argument("config", type=Path)
    sim.add_argument("--drops", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", type=Path, default=Path("results"))
    sim.add_argument("--engine", choices=["closed-form", "waveform"])
    sim.add_argument("--emit", choices=["cdf", "table", "both"], default="both")
    sim.add_argument("--normalization", choices=["per_subcarrier", "total_split"])
    sim.add_argument("--dump-geometry", action="store_true")
    sim.add_argument("--dump-sinr", action="store_true")

    val = sub.add_parser("validate", help="check a configuration file and exit")
    val.add_argument("config", type=Path)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.command == "validate":
            print(f"{args.config}: OK (M={cfg.M}, N_t={cfg.N_t}, K={cfg.K}, "
                  f"groups={len(cfg.groups())}, tau_p={cfg.pilot_symbols()})")
            return 0
        overrides = {k: v for k, v in (("drops", args.drops), ("seed", args.seed),
                                       ("engine", args.engine),
                                       ("power_normalization", args.normalization)) if v is not None}
        cfg = validate(cfg.replace(**overrides))
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = run_experiment(cfg)
    summary = write_outputs(report, cfg, args.out, args.emit)
    if args.dump_geometry:
        _dump_geometry(cfg, args.out / "geometry.csv")
    if args.dump_sinr:
        _dump_sinr(report, args.out / "sinr.csv")
    if args.emit in ("table", "both"):
        print(format_table(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
