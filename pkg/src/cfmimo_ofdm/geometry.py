"""Random AP/user drops and large-scale fading (three-slope path loss + shadowing)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PathlossParams, SimConfig


@dataclass
class LargeScaleState:
    ap_positions: np.ndarray    # (N_AP, 2)
    user_positions: np.ndarray  # (K, 2)
    beta: np.ndarray            # (M, K), rows repeated N_t times per AP

    @property
    def beta_ap(self) -> np.ndarray:
        """Per-AP large-scale fading, shape (N_AP, K)."""
        n_t = self.beta.shape[0] // self.ap_positions.shape[0]
        return self.beta[::n_t]


def pathloss_dB(d, params: PathlossParams = PathlossParams()):
    """Three-slope path loss (negative dB) for distances in meters.

    35 dB/decade beyond d1, 20 dB/decade between d0 and d1, flat below d0.
    Accepts scalars or arrays.
    """
    d = np.asarray(d, dtype=float)
    d_km = d / 1000.0
    d0_km = params.d0 / 1000.0
    d1_km = params.d1 / 1000.0
    with np.errstate(divide="ignore"):
        far = -params.L_dB - 35.0 * np.log10(d_km)
        mid = -params.L_dB - 15.0 * np.log10(d1_km) - 20.0 * np.log10(d_km)
    near = -params.L_dB - 15.0 * np.log10(d1_km) - 20.0 * np.log10(d0_km)
    out = np.where(d > params.d1, far, np.where(d > params.d0, mid, near))
    return out[()] if out.ndim == 0 else out


def beta_from(pl_dB, shadow_dB):
    return 10.0 ** ((np.asarray(pl_dB) + np.asarray(shadow_dB)) / 10.0)


def distances(ap_positions: np.ndarray, user_positions: np.ndarray) -> np.ndarray:
    diff = ap_positions[:, None, :] - user_positions[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def drop_geometry(cfg: SimConfig, rng: np.random.Generator) -> LargeScaleState:
    """Uniform AP and user placement over the square, then beta for every link.

    Shadowing is drawn per (AP, user) so that collocated antennas share it.
    """
    ap = rng.uniform(0.0, cfg.area_side, size=(cfg.N_AP, 2))
    users = rng.uniform(0.0, cfg.area_side, size=(cfg.K, 2))
    d = np.maximum(distances(ap, users), cfg.min_distance)
    shadow = cfg.shadowing_sigma_dB * rng.standard_normal(d.shape)
    if not cfg.shadowing_below_d1:
        shadow = np.where(d > cfg.pathloss.d1, shadow, 0.0)
    beta_ap = beta_from(pathloss_dB(d, cfg.pathloss), shadow)
    return LargeScaleState(ap, users, np.repeat(beta_ap, cfg.N_t, axis=0))
