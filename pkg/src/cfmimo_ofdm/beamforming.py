"""Conjugate beamforming, full-power coefficients and the closed-form SINR bound."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


def full_power_eta(alpha: np.ndarray) -> np.ndarray:
    """eta_mk = 1 / sum_k' alpha_mk' for every user served on the RB.

    The values are not clamped to 1: that would break sum_k eta*alpha = 1,
    i.e. each antenna radiating its full per-subcarrier budget.
    """
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise ValueError("alpha must be positive")
    row = 1.0 / alpha.sum(axis=-1, keepdims=True)
    if log.isEnabledFor(logging.DEBUG) and np.any(row > 1):
        log.debug("full-power eta exceeds 1 on %d antennas (max %.3g)",
                  int((row > 1).sum()), float(row.max()))
    return np.broadcast_to(row, alpha.shape).copy()


@dataclass
class SinrReport:
    gamma: np.ndarray
    desired: np.ndarray
    interference: np.ndarray
    noise: float


def sinr_components(eta, alpha, beta, p_d: float, sigma_z2: float, N_t: int = 1) -> SinrReport:
    """Terms of the lower bound for all users on one RB.

    Inputs are (n, K_r) with one row per antenna (N_t=1) or per AP (N_t>1).
    """
    eta = np.asarray(eta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    coherent = (np.sqrt(eta) * alpha).sum(axis=0)
    load = (eta * alpha).sum(axis=1)
    desired = p_d * N_t ** 2 * coherent ** 2
    interference = p_d * N_t * (beta * load[:, None]).sum(axis=0)
    return SinrReport(desired / (sigma_z2 + interference), desired, interference, sigma_z2)


def sinr_single(eta, alpha, beta, p_d: float, sigma_z2: float) -> np.ndarray:
    """gamma_k = p_d (sum_m sqrt(eta) alpha)^2 / (sigma^2 + p_d sum_m beta_mk sum_k' eta alpha)."""
    eta = np.asarray(eta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    coherent = (np.sqrt(eta) * alpha).sum(axis=0)
    load = (eta * alpha).sum(axis=1)
    return p_d * coherent ** 2 / (sigma_z2 + p_d * (beta * load[:, None]).sum(axis=0))


def sinr_multi(eta_q, alpha_q, beta_q, N_t: int, p_d: float, sigma_z2: float) -> np.ndarray:
    """Bound for N_AP collocated arrays of N_t antennas; inputs are (N_AP, K_r)."""
    eta_q = np.asarray(eta_q, dtype=float)
    alpha_q = np.asarray(alpha_q, dtype=float)
    beta_q = np.asarray(beta_q, dtype=float)
    coherent = (np.sqrt(eta_q) * alpha_q).sum(axis=0)
    load = (eta_q * alpha_q).sum(axis=1)
    return p_d * N_t ** 2 * coherent ** 2 / (sigma_z2 + p_d * N_t * (beta_q * load[:, None]).sum(axis=0))


def beamform_transmit(g_hat: np.ndarray, eta: np.ndarray, p_d: float, data: np.ndarray) -> np.ndarray:
    """x_m = sqrt(p_d) sum_k sqrt(eta_mk) conj(g_hat_mk) s_k.

    g_hat is (..., M, K, G) over G resource units, data (..., K, G) and eta
    broadcastable to (..., M, K). Returns (..., M, G).
    """
    w = np.sqrt(np.asarray(eta, dtype=float))[..., None]
    s = np.asarray(data)[..., None, :, :]
    return np.sqrt(p_d) * (w * np.conj(g_hat) * s).sum(axis=-2)
