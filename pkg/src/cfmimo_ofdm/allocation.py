"""User grouping, RB assignment, per-user rates and sum throughput."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .config import ConfigError, SimConfig


@dataclass
class AllocationPlan:
    groups: List[np.ndarray]          # user indices of each group
    rb_sets: Dict[int, List[int]]     # group -> 1-based RB indices
    tau_p: int

    def users_on_rb(self) -> Dict[int, int]:
        """K_r for every assigned RB."""
        return {r: len(self.groups[s]) for s, rbs in self.rb_sets.items() for r in rbs}

    def group_of(self) -> np.ndarray:
        out = np.empty(sum(len(g) for g in self.groups), dtype=int)
        for s, g in enumerate(self.groups):
            out[g] = s
        return out


def build_plan(cfg: SimConfig) -> AllocationPlan:
    """Partition users 0..K-1 into consecutive groups and attach their RB sets."""
    sizes = cfg.groups()
    if sum(sizes) != cfg.K:
        raise ConfigError("group_sizes", f"groups cover {sum(sizes)} users, K={cfg.K}")
    bounds = np.cumsum([0] + sizes)
    groups = [np.arange(bounds[s], bounds[s + 1]) for s in range(len(sizes))]
    rb_sets = cfg.rb_sets()
    owner: Dict[int, int] = {}
    for s, rbs in rb_sets.items():
        for r in rbs:
            if r in owner:
                raise ConfigError("rb_assignment", f"RB {r} assigned to groups {owner[r]} and {s}")
            owner[r] = s
    tau_p = cfg.pilot_symbols()
    for s, rbs in rb_sets.items():
        if rbs and sizes[s] > tau_p * cfg.lambda_RB:
            raise ConfigError("group_sizes", f"pilot capacity exceeded by group {s}")
    return AllocationPlan(groups, rb_sets, tau_p)


def frame_factor(tau_p: int, tau_u: int, N_T: int) -> float:
    """Fraction of the frame left for downlink payload."""
    if tau_p + tau_u > N_T:
        raise ValueError("tau_p + tau_u exceeds the frame length")
    return 1.0 - (tau_p + tau_u) / N_T


def user_rate(gammas, lambda_RB: int, delta_f: float, tau_p: int, tau_u: int, N_T: int) -> float:
    """Downlink rate in bit/s of one user given its SINR on each of its RBs."""
    gammas = np.asarray(gammas, dtype=float)
    per_rb = lambda_RB * delta_f * np.log2(1.0 + gammas)
    return frame_factor(tau_p, tau_u, N_T) * math.fsum(per_rb)


def sum_throughput(rates) -> float:
    return math.fsum(np.asarray(rates, dtype=float).ravel())


@dataclass
class RateReport:
    """Per-drop, per-user rates plus everything needed to summarize them."""

    rates: np.ndarray               # (drops, K) bit/s
    group_of: np.ndarray            # (K,)
    gamma: np.ndarray               # (drops, K) SINR on the user's RBs
    normalization: str
    seed: int
    desired: Optional[np.ndarray] = None       # (drops, K) bound numerator
    interference: Optional[np.ndarray] = None  # (drops, K) bound interference term
    rb_sets: Dict[int, List[int]] = field(default_factory=dict)
    noise: float = 0.0
    max_eta: float = 0.0
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def per_drop_sum(self) -> np.ndarray:
        return np.array([sum_throughput(r) for r in self.rates])

    @property
    def sum_bps(self) -> float:
        """System sum throughput averaged over drops."""
        return math.fsum(self.per_drop_sum) / len(self.rates)

    def group_sums(self) -> Dict[int, float]:
        """Mean (over drops) sum rate of each group."""
        out = {}
        for s in np.unique(self.group_of):
            out[int(s)] = math.fsum(self.rates[:, self.group_of == s].ravel()) / len(self.rates)
        return out
