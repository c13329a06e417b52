"""Drop loop, seeding and result files."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .allocation import AllocationPlan, RateReport, build_plan, frame_factor
from .beamforming import full_power_eta, sinr_components
from .channel import profile_from_config
from .config import SimConfig, validate
from .geometry import drop_geometry
from .stats import build_cdf, percentile
from .training import estimate_variance

log = logging.getLogger(__name__)


class SimulationError(RuntimeError):
    pass


def drop_rng(seed: int, drop: int) -> np.random.Generator:
    """Independent stream for one drop: SeedSequence entropy (seed, drop).

    The stream depends only on the pair, so drops can run in any order or in
    parallel and still reproduce.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), int(drop)]))


@dataclass
class DropResult:
    drop: int
    rates: np.ndarray         # (K,)
    gamma: np.ndarray         # (K,)
    desired: np.ndarray       # (K,) numerator of the bound
    interference: np.ndarray  # (K,) interference + estimation-error term
    max_eta: float


def _group_sinr(cfg: SimConfig, beta: np.ndarray, users: np.ndarray, rng, pdp):
    beta_q = beta[:: cfg.N_t, users]
    alpha_q = estimate_variance(beta_q, cfg.p_u_subcarrier, cfg.sigma_z2)
    eta_q = full_power_eta(alpha_q)
    if cfg.engine == "waveform":
        from .waveform import measured_sinr

        gamma = measured_sinr(beta[:, users], cfg, pdp, rng)
        nan = np.full(len(users), np.nan)
        return gamma, nan, nan, float(eta_q.max())
    rep = sinr_components(eta_q, alpha_q, beta_q, cfg.p_d_subcarrier, cfg.sigma_z2, cfg.N_t)
    return rep.gamma, rep.desired, rep.interference, float(eta_q.max())


def simulate_drop(cfg: SimConfig, plan: AllocationPlan, drop: int, pdp=None) -> DropResult:
    rng = drop_rng(cfg.seed, drop)
    state = drop_geometry(cfg, rng)
    factor = frame_factor(plan.tau_p, cfg.tau_u, cfg.N_T)
    rb_bandwidth = cfg.lambda_RB * cfg.delta_f
    rates = np.zeros(cfg.K)
    gamma = np.zeros(cfg.K)
    desired = np.zeros(cfg.K)
    interference = np.zeros(cfg.K)
    max_eta = 0.0
    for s, users in enumerate(plan.groups):
        n_rb = len(plan.rb_sets.get(s, []))
        if n_rb == 0:
            continue
        g, num, den, eta_max = _group_sinr(cfg, state.beta, users, rng, pdp)
        if not np.all(np.isfinite(g)):
            raise SimulationError(f"non-finite SINR in drop {drop}, group {s}")
        # the bound is the same on every RB of the group
        rates[users] = factor * n_rb * rb_bandwidth * np.log2(1.0 + g)
        gamma[users] = g
        desired[users] = num
        interference[users] = den
        max_eta = max(max_eta, eta_max)
    return DropResult(drop, rates, gamma, desired, interference, max_eta)


def run_experiment(cfg: SimConfig, map_fn: Callable = map) -> RateReport:
    """Run ``cfg.drops`` independent drops and collect per-user rates.

    ``map_fn`` may be swapped for a parallel map (e.g. an executor's); the
    result does not depend on execution order.
    """
    validate(cfg)
    plan = build_plan(cfg)
    pdp = profile_from_config(cfg) if cfg.engine == "waveform" else None
    results = list(map_fn(lambda d: simulate_drop(cfg, plan, d, pdp), range(cfg.drops)))
    results.sort(key=lambda r: r.drop)
    return RateReport(
        rates=np.stack([r.rates for r in results]),
        group_of=plan.group_of(),
        gamma=np.stack([r.gamma for r in results]),
        desired=np.stack([r.desired for r in results]),
        interference=np.stack([r.interference for r in results]),
        rb_sets=plan.rb_sets,
        noise=cfg.sigma_z2,
        normalization=cfg.power_normalization,
        seed=cfg.seed,
        max_eta=max(r.max_eta for r in results),
        extras={"tau_p": plan.tau_p},
    )


def summarize(report: RateReport, cfg: SimConfig) -> dict:
    per_user = build_cdf(report.rates)
    per_drop = report.per_drop_sum
    return {
        "p95_likely_bps": percentile(per_user, 0.05),
        "median_bps": percentile(per_user, 0.5),
        "mean_bps": float(np.mean(report.rates)),
        "sum_bps": report.sum_bps,
        "sum_median_bps": float(np.median(per_drop)),
        "per_group_sum_bps": {str(s): v for s, v in report.group_sums().items()},
        "samples": int(report.rates.size),
        "drops": int(report.rates.shape[0]),
        "seed": int(report.seed),
        "normalization": report.normalization,
        "engine": cfg.engine,
        "tau_p": int(report.extras.get("tau_p", cfg.pilot_symbols())),
        "max_eta": report.max_eta,
        "eta_exceeds_one": bool(report.max_eta > 1.0),
        "config": cfg.to_dict(),
    }


def write_rates(report: RateReport, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["drop", "user", "group", "rate_bps"])
        for d, row in enumerate(report.rates):
            for k, rate in enumerate(row):
                w.writerow([d, k, int(report.group_of[k]), repr(float(rate))])


def write_cdf(samples: Iterable[float], path: Path, points: int = 1000) -> None:
    table = build_cdf(samples).table(points)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rate_bps", "cdf"])
        for x, f in table:
            w.writerow([repr(float(x)), repr(float(f))])


def write_outputs(report: RateReport, cfg: SimConfig, out_dir, emit: str = "both") -> dict:
    """rates.csv always; cdf.csv / cdf_sum.csv for emit in {cdf, both}; summary.json always."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_rates(report, out / "rates.csv")
    if emit in ("cdf", "both"):
        write_cdf(report.rates, out / "cdf.csv")
        write_cdf(report.per_drop_sum, out / "cdf_sum.csv")
    summary = summarize(report, cfg)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def format_table(summary: dict) -> str:
    mbps = 1e6
    return (f"95%-likely [Mbps] {summary['p95_likely_bps'] / mbps:10.4f}\n"
            f"Median     [Mbps] {summary['median_bps'] / mbps:10.4f}\n"
            f"Sum        [Mbps] {summary['sum_bps'] / mbps:10.4f}\n"
            f"({summary['drops']} drops, seed {summary['seed']}, "
            f"{summary['normalization']}, tau_p={summary['tau_p']})")
