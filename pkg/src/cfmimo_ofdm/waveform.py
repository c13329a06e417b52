"""Waveform engine: a full OFDM frame (uplink pilots + downlink payload) per realization.

Used to check the closed-form SINR against measured signal powers. Every
subcarrier-level quantity is produced by the time-domain chain in
:mod:`cfmimo_ofdm.ofdm`; the split of the received signal into desired,
interference, estimation-error and noise terms is bookkept alongside and
checked to add up to the waveform output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .beamforming import beamform_transmit, full_power_eta, sinr_components
from .channel import PowerDelayProfile, draw_taps, frequency_response
from .ofdm import complex_noise, dft, propagate, remove_cp
from .training import assign_pilots, estimate_variance, mmse_estimate

QPSK = np.exp(1j * np.pi / 4 * np.array([1, 3, 5, 7]))


@dataclass
class _Moments:
    """Running sums over (realization, subcarrier) samples, per user."""

    n: int = 0
    sums: Dict[str, np.ndarray] = field(default_factory=dict)

    def add(self, name: str, values: np.ndarray):
        # values: (B, K, N) -> per-user sum over realizations and subcarriers
        total = values.sum(axis=(0, 2))
        self.sums[name] = self.sums.get(name, 0) + total

    def mean(self, name: str) -> np.ndarray:
        return self.sums[name] / self.n


@dataclass
class CrossValidation:
    """Measured powers next to the closed-form terms, one entry per user."""

    desired_measured: np.ndarray
    desired_closed: np.ndarray
    residual_measured: np.ndarray
    residual_closed: np.ndarray
    noise_measured: np.ndarray
    sinr_measured: np.ndarray
    sinr_closed: np.ndarray
    labeled_powers: Dict[str, np.ndarray]
    estimate_variance_measured: np.ndarray  # (M, K)
    error_variance_measured: np.ndarray     # (M, K)
    estimate_error_correlation: np.ndarray  # (M, K) sample E[g_hat conj(xi)]
    alpha: np.ndarray
    beta: np.ndarray
    max_decomposition_error: float
    samples: int


def _pilot_observations(taps, pilots, plans, tau_w, N, p_u, sigma_z2, L_cp, rng):
    """Run the uplink pilot phase through the waveform; return (B, M, K, N_RB) observations."""
    B, M, K, L = taps.shape
    tx = np.zeros((B, K, tau_w, N), dtype=complex)
    for plan in plans:
        for k, (t, n) in plan.slots.items():
            tx[:, k, t - 1, n] = np.sqrt(p_u) * pilots[:, k]
    up_taps = np.swapaxes(taps, 1, 2)  # (B, K, M, L): users transmit
    noise = complex_noise(rng, (B, M, tau_w * (N + L_cp)), sigma_z2 / N)
    rx = propagate(up_taps, tx, L_cp, noise)  # (B, M, tau_w, N)
    obs = np.empty((B, M, K, len(plans)), dtype=complex)
    for r, plan in enumerate(plans):
        for k, (t, n) in plan.slots.items():
            obs[:, :, k, r] = rx[:, :, t - 1, n]
    return obs


def validator_sample_interval(pdp: PowerDelayProfile, N: int, base: float = 50e-9) -> float:
    """Finest integer multiple of ``base`` whose channel (plus CP) fits in an N-point block.

    Coarser grids put the profile's paths off-grid; the truncated sinc
    pulses then make the per-subcarrier channel variance uneven, which
    biases fourth-order moments away from the stationary model.
    """
    q = 1
    while pdp.tap_count(q * base) + 1 >= N:
        q += 1
    return q * base


def cross_validate(beta: np.ndarray, pdp: PowerDelayProfile, p_d: float, p_u: float,
                   sigma_z2: float, rng: np.random.Generator, N: int = 64,
                   lambda_RB: int = 1, realizations: int = 10_000,
                   T_s: Optional[float] = None, chunk: int = 500) -> CrossValidation:
    """Simulate ``realizations`` frames for one fixed large-scale state.

    beta is (M, K_r): every user shares every RB. ``T_s`` defaults to
    :func:`validator_sample_interval`. Each RB gets a contamination-free
    pilot plan with the minimum number of pilot symbols; estimates from the
    pilot RU are reused on every subcarrier of the RB.
    """
    beta = np.asarray(beta, dtype=float)
    M, K = beta.shape
    if N % lambda_RB:
        raise ValueError("N must be a multiple of lambda_RB")
    n_rb = N // lambda_RB
    T_s = validator_sample_interval(pdp, N) if T_s is None else T_s
    L = pdp.tap_count(T_s)
    L_cp = L + 1
    tau_w = math.ceil(K / lambda_RB)
    plans = [assign_pilots(range(K), tau_w, lambda_RB, r + 1) for r in range(n_rb)]

    alpha = estimate_variance(beta, p_u, sigma_z2)
    eta = full_power_eta(alpha)
    closed = sinr_components(eta, alpha, beta, p_d, sigma_z2)
    sqrt_eta = np.sqrt(eta)

    mom = _Moments()
    est_sum = np.zeros((M, K))
    err_sum = np.zeros((M, K))
    cross_sum = np.zeros((M, K), dtype=complex)
    worst = 0.0
    done = 0
    while done < realizations:
        B = min(chunk, realizations - done)
        done += B
        taps = draw_taps(pdp, np.broadcast_to(beta, (B, M, K)), T_s, rng, L)
        pilots = np.exp(2j * np.pi * rng.uniform(size=(B, K)))
        obs = _pilot_observations(taps, pilots, plans, tau_w, N, p_u, sigma_z2, L_cp, rng)
        g_hat_rb = mmse_estimate(obs, beta[None, :, :, None], p_u, sigma_z2, pilots[:, None, :, None])
        g_hat = np.repeat(g_hat_rb, lambda_RB, axis=-1)        # (B, M, K, N)
        g_true = frequency_response(taps, N)                    # (B, M, K, N)
        xi = g_true - g_hat

        s = QPSK[rng.integers(0, 4, size=(B, K, N))]
        x = beamform_transmit(g_hat, eta, p_d, s)              # (B, M, N)
        z = complex_noise(rng, (B, K, N + L_cp), sigma_z2 / N)
        y = propagate(taps, x[:, :, None, :], L_cp, z)[:, :, 0, :]  # (B, K, N)
        z_freq = dft(remove_cp(z, L_cp))

        # G_k,n = sum_m sqrt(eta_mk) |g_hat_mk,n|^2
        gain = np.einsum("mk,bmkn->bkn", sqrt_eta, np.abs(g_hat) ** 2)
        desired = np.sqrt(p_d) * gain * s
        beam = sqrt_eta[None, :, :, None] * np.conj(g_hat) * s[:, None, :, :]  # (B, M, K', N)
        through_hat = np.einsum("bmkn,bmjn->bkjn", g_hat, beam)
        total_hat = through_hat.sum(axis=2)
        own = np.einsum("bkkn->bkn", through_hat)
        mui = np.sqrt(p_d) * (total_hat - own)
        err = np.sqrt(p_d) * np.einsum("bmkn,bmn->bkn", xi, beam.sum(axis=2))
        worst = max(worst, float(np.max(np.abs(y - (desired + mui + err + z_freq)))
                                 / np.sqrt(np.mean(np.abs(y) ** 2))))

        mom.n += B * N
        mom.add("gain", gain)
        mom.add("gain2", gain ** 2)
        mom.add("desired", np.abs(desired) ** 2)
        mom.add("mui", np.abs(mui) ** 2)
        mom.add("err", np.abs(err) ** 2)
        mom.add("noise", np.abs(z_freq) ** 2)
        mom.add("received", np.abs(y) ** 2)
        est_sum += (np.abs(g_hat) ** 2).mean(axis=-1).sum(axis=0)
        err_sum += (np.abs(xi) ** 2).mean(axis=-1).sum(axis=0)
        cross_sum += (g_hat * np.conj(xi)).mean(axis=-1).sum(axis=0)

    mean_gain = mom.mean("gain")
    gain_var = mom.mean("gain2") - mean_gain ** 2
    desired_measured = p_d * mean_gain ** 2
    residual_measured = p_d * gain_var + mom.mean("mui") + mom.mean("err")
    noise_measured = mom.mean("noise")
    return CrossValidation(
        desired_measured=desired_measured,
        desired_closed=closed.desired,
        residual_measured=residual_measured,
        residual_closed=closed.interference,
        noise_measured=noise_measured,
        sinr_measured=desired_measured / (residual_measured + noise_measured),
        sinr_closed=closed.gamma,
        labeled_powers={name: mom.mean(name) for name in ("desired", "mui", "err", "noise", "received")},
        estimate_variance_measured=est_sum / realizations,
        error_variance_measured=err_sum / realizations,
        estimate_error_correlation=cross_sum / realizations,
        alpha=alpha,
        beta=beta,
        max_decomposition_error=worst,
        samples=mom.n,
    )


def measured_sinr(beta: np.ndarray, cfg, pdp: PowerDelayProfile, rng: np.random.Generator) -> np.ndarray:
    """SINR of every user of one group as measured by the waveform engine."""
    res = cross_validate(beta, pdp, cfg.p_d_subcarrier, cfg.p_u_subcarrier, cfg.sigma_z2, rng,
                         N=cfg.waveform_N, lambda_RB=cfg.waveform_lambda_RB,
                         realizations=cfg.waveform_realizations,
                         T_s=validator_sample_interval(pdp, cfg.waveform_N, cfg.sample_interval))
    return res.sinr_measured
