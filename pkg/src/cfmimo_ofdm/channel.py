"""Frequency-selective small-scale fading from a power-delay profile."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ofdm import dft, zero_pad

ETU_DELAYS_US = (0.0, 0.05, 0.12, 0.2, 0.23, 0.5, 1.6, 2.3, 5.0)
ETU_POWERS_DB = (-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0)


@dataclass(frozen=True)
class PowerDelayProfile:
    delays: np.ndarray      # seconds
    powers_dB: np.ndarray
    powers: np.ndarray      # linear, normalized to unit sum

    @classmethod
    def from_lists(cls, delays_us: Sequence[float], powers_dB: Sequence[float]) -> "PowerDelayProfile":
        delays = np.asarray(delays_us, dtype=float) * 1e-6
        p_dB = np.asarray(powers_dB, dtype=float)
        if delays.shape != p_dB.shape or delays.ndim != 1 or delays.size == 0:
            raise ValueError("delays and powers must be non-empty lists of equal length")
        if delays[0] < 0 or np.any(np.diff(delays) <= 0):
            raise ValueError("delays must be non-negative and strictly increasing")
        lin = 10.0 ** (p_dB / 10.0)
        return cls(delays, p_dB, lin / lin.sum())

    @property
    def max_delay(self) -> float:
        return float(self.delays[-1])

    def tap_count(self, T_s: float) -> int:
        """Filter length covering the delay spread: ceil(T_d/T_s) + 1 taps."""
        return int(math.ceil(self.max_delay / T_s - 1e-9)) + 1


ETU = PowerDelayProfile.from_lists(ETU_DELAYS_US, ETU_POWERS_DB)


def profile_from_config(cfg) -> PowerDelayProfile:
    if cfg.pdp_delays_us is not None:
        return PowerDelayProfile.from_lists(cfg.pdp_delays_us, cfg.pdp_powers_dB)
    if cfg.pdp.lower() == "etu":
        return ETU
    raise ValueError(f"unknown power-delay profile preset {cfg.pdp!r}")


def sinc_matrix(pdp: PowerDelayProfile, T_s: float, L: int) -> np.ndarray:
    """(P, L) pulse-shaping weights sinc(l - tau_i / T_s), normalized sinc."""
    return np.sinc(np.arange(L)[None, :] - pdp.delays[:, None] / T_s)


def draw_taps(pdp: PowerDelayProfile, beta, T_s: float, rng: np.random.Generator,
              L: Optional[int] = None) -> np.ndarray:
    """Time-domain taps sqrt(beta) * h for every entry of ``beta``.

    Path gains are CN(0, p_i); each path is resampled onto the T_s grid with
    a sinc pulse and truncated to L taps. The result is rescaled so that
    E[sum_l |h_l|^2] = 1 despite truncation. Output shape beta.shape + (L,).
    """
    if not math.isclose(float(pdp.powers.sum()), 1.0, rel_tol=1e-12):
        raise ValueError("power-delay profile is not normalized")
    beta = np.asarray(beta, dtype=float)
    L = pdp.tap_count(T_s) if L is None else L
    W = sinc_matrix(pdp, T_s, L)
    energy = float(pdp.powers @ (W ** 2).sum(axis=1))
    shape = beta.shape + (pdp.powers.size,)
    a = np.sqrt(pdp.powers / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    h = a @ W / math.sqrt(energy)
    return np.sqrt(beta)[..., None] * h


def frequency_response(taps: np.ndarray, N: int) -> np.ndarray:
    return dft(zero_pad(taps, N))


def rb_centers(N_RB: int, lambda_RB: int) -> np.ndarray:
    """0-based index of the representative (center) subcarrier of each RB."""
    return np.arange(N_RB) * lambda_RB + lambda_RB // 2


def block_fade(freq_response: np.ndarray, N_RB: int, lambda_RB: int) -> np.ndarray:
    if freq_response.shape[-1] != N_RB * lambda_RB:
        raise ValueError("frequency response length must equal N_RB * lambda_RB")
    return freq_response[..., rb_centers(N_RB, lambda_RB)]


@dataclass
class ChannelRealization:
    taps: np.ndarray            # (M, K, L)
    freq_response: np.ndarray   # (M, K, N)
    rb_gain: np.ndarray         # (M, K, N_RB)

    @property
    def L(self) -> int:
        return self.taps.shape[-1]


def realize_channel(pdp: PowerDelayProfile, beta: np.ndarray, T_s: float, N_RB: int,
                    lambda_RB: int, rng: np.random.Generator) -> ChannelRealization:
    taps = draw_taps(pdp, beta, T_s, rng)
    freq = frequency_response(taps, N_RB * lambda_RB)
    return ChannelRealization(taps, freq, block_fade(freq, N_RB, lambda_RB))
