"""Uplink training: RU-orthogonal pilot plan, pilot reception and MMSE estimation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np


class PilotCapacityError(ValueError):
    pass


@dataclass
class PilotPlan:
    """Reserved pilot RU (t, n) for every user of one RB.

    ``t`` is the 1-based OFDM symbol (1..tau_p), ``n`` the 0-based
    subcarrier inside the RB's band. All other users are silent on that RU.
    """

    rb_index: int
    tau_p: int
    lambda_RB: int
    slots: Dict[int, Tuple[int, int]]
    pilots: Dict[int, complex] = field(default_factory=dict)

    @property
    def capacity(self) -> int:
        return self.tau_p * self.lambda_RB

    def grid(self, p_u: float) -> Dict[int, np.ndarray]:
        """Per-user (tau_p, lambda_RB) pilot-phase transmit grid."""
        out = {}
        base = (self.rb_index - 1) * self.lambda_RB
        for k, (t, n) in self.slots.items():
            g = np.zeros((self.tau_p, self.lambda_RB), dtype=complex)
            g[t - 1, n - base] = np.sqrt(p_u) * self.pilots.get(k, 1.0)
            out[k] = g
        return out


def assign_pilots(users_on_rb: Sequence[int], tau_p: int, lambda_RB: int, rb_index: int,
                  rng: Optional[np.random.Generator] = None) -> PilotPlan:
    """Row-major fill: the j-th user gets symbol j // lambda_RB + 1, subcarrier j % lambda_RB.

    With ``rng`` each pilot symbol is a unit-modulus random phase, otherwise 1.
    """
    users = list(users_on_rb)
    if len(users) > tau_p * lambda_RB:
        raise PilotCapacityError(
            f"pilot capacity exceeded: {len(users)} users > tau_p*lambda_RB = {tau_p * lambda_RB}")
    base = (rb_index - 1) * lambda_RB
    slots = {k: (j // lambda_RB + 1, base + j % lambda_RB) for j, k in enumerate(users)}
    if rng is None:
        pilots = {k: 1.0 + 0j for k in users}
    else:
        phases = rng.uniform(0.0, 2 * np.pi, len(users))
        pilots = {k: complex(np.exp(1j * ph)) for k, ph in zip(users, phases)}
    return PilotPlan(rb_index, tau_p, lambda_RB, slots, pilots)


def receive_pilot(g_true, p_u: float, pilot, noise=0.0):
    return np.sqrt(p_u) * np.asarray(g_true) * pilot + noise


def estimate_variance(beta, p_u: float, sigma_z2: float):
    """alpha = p_u beta^2 / (p_u beta + sigma_z2), the variance of the MMSE estimate."""
    beta = np.asarray(beta, dtype=float)
    return p_u * beta ** 2 / (p_u * beta + sigma_z2)


def mmse_coefficient(beta, p_u: float, sigma_z2: float, pilot=1.0):
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0) or p_u <= 0 or sigma_z2 < 0:
        raise ValueError("MMSE needs beta > 0, p_u > 0 and sigma_z2 >= 0")
    pilot = np.asarray(pilot)
    return np.sqrt(p_u) * beta * np.conj(pilot) / (p_u * beta * np.abs(pilot) ** 2 + sigma_z2)


def mmse_estimate(y_obs, beta, p_u: float, sigma_z2: float, pilot=1.0):
    return mmse_coefficient(beta, p_u, sigma_z2, pilot) * np.asarray(y_obs)


def mmse_estimate_vector(y_obs, beta_q: float, p_u: float, sigma_z2: float, pilot=1.0):
    """N_t-antenna AP: R_gg = beta_q I and R_nn = sigma_z2 I make the estimator elementwise."""
    return mmse_estimate(np.asarray(y_obs), beta_q, p_u, sigma_z2, pilot)


def uplink_payload_symbol(q, psi: float, p_u: float):
    if not 0.0 <= psi <= 1.0:
        raise ValueError("power coefficient psi must lie in [0, 1]")
    return np.sqrt(psi * p_u) * np.asarray(q)


@dataclass
class EstimationResult:
    g_hat: np.ndarray
    alpha: np.ndarray
    error: np.ndarray


def draw_estimates(beta: np.ndarray, p_u: float, sigma_z2: float, rng: np.random.Generator,
                   size: Tuple[int, ...] = ()) -> EstimationResult:
    """Sample (g_hat, xi) directly from CN(0, alpha) and CN(0, beta - alpha)."""
    beta = np.asarray(beta, dtype=float)
    alpha = estimate_variance(beta, p_u, sigma_z2)
    shape = tuple(size) + beta.shape

    def cn(var):
        return np.sqrt(var / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    return EstimationResult(cn(alpha), alpha, cn(beta - alpha))
