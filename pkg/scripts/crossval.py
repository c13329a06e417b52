"""Closed-form SINR terms against powers measured on the OFDM waveform for one drop."""

import argparse

import numpy as np

from cfmimo_ofdm import SimConfig
from cfmimo_ofdm.channel import ETU
from cfmimo_ofdm.geometry import drop_geometry
from cfmimo_ofdm.harness import drop_rng
from cfmimo_ofdm.waveform import cross_validate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=8)
    ap.add_argument("--users", type=int, default=2)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--realizations", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--normalization", default="total_split")
    args = ap.parse_args()
    cfg = SimConfig(M=args.M, K=args.users, power_normalization=args.normalization)
    beta = drop_geometry(cfg, drop_rng(args.seed, 0)).beta
    res = cross_validate(beta, ETU, cfg.p_d_subcarrier, cfg.p_u_subcarrier, cfg.sigma_z2,
                         np.random.default_rng(args.seed), N=args.N, realizations=args.realizations)
    print(f"samples per user: {res.samples}, decomposition error {res.max_decomposition_error:.1e}")
    for k in range(beta.shape[1]):
        print(f"user {k}: desired {res.desired_measured[k]:.4e} vs {res.desired_closed[k]:.4e}, "
              f"residual {res.residual_measured[k]:.4e} vs {res.residual_closed[k]:.4e}, "
              f"SINR {res.sinr_measured[k]:.4f} measured / {res.sinr_closed[k]:.4f} bound")


if __name__ == "__main__":
    main()
