"""Waveform-level OFDM chain: DFT, cyclic prefix, convolution and propagation.

The DFT follows the unnormalized convention y_n = sum_n' x_n' exp(+2j*pi*n*n'/N)
with inverse (1/N) F^*. All functions operate on the last axis and broadcast
over leading axes.
"""

from __future__ import annotations

from typing import Optional

import numpy as np


class CyclicPrefixError(ValueError):
    pass


def dft(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return np.fft.ifft(x, axis=-1) * x.shape[-1]


def idft(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return np.fft.fft(x, axis=-1) / x.shape[-1]


def dft_matrix(N: int) -> np.ndarray:
    n = np.arange(N)
    return np.exp(2j * np.pi * np.outer(n, n) / N)


def add_cp(x: np.ndarray, L_cp: int) -> np.ndarray:
    N = x.shape[-1]
    if not 0 < L_cp < N:
        raise CyclicPrefixError(f"need 0 < L_cp < N, got L_cp={L_cp}, N={N}")
    return np.concatenate([x[..., N - L_cp:], x], axis=-1)


def remove_cp(y: np.ndarray, L_cp: int) -> np.ndarray:
    return y[..., L_cp:]


def zero_pad(g: np.ndarray, N: int) -> np.ndarray:
    L = g.shape[-1]
    if L > N:
        raise ValueError(f"filter length {L} exceeds block size {N}")
    pad = [(0, 0)] * (g.ndim - 1) + [(0, N - L)]
    return np.pad(g, pad)


def cyclic_convolve(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    """y_n = sum_l g_l x_{(n-l) mod N}, evaluated directly (no FFT)."""
    g = np.asarray(g, dtype=complex)
    x = np.asarray(x, dtype=complex)
    if g.shape[-1] != x.shape[-1]:
        raise ValueError("cyclic convolution needs equal lengths")
    N = x.shape[-1]
    idx = (np.arange(N)[:, None] - np.arange(N)[None, :]) % N
    # circulant of x: C[n, l] = x[(n - l) mod N]
    return np.einsum("...nl,...l->...n", x[..., idx], g)


def linear_convolve(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Full linear convolution along the last axis, batched via FFT."""
    n_out = x.shape[-1] + g.shape[-1] - 1
    nfft = 1 << (n_out - 1).bit_length()
    y = np.fft.ifft(np.fft.fft(x, nfft, axis=-1) * np.fft.fft(g, nfft, axis=-1), axis=-1)
    return y[..., :n_out]


def complex_noise(rng: np.random.Generator, shape, var: float) -> np.ndarray:
    return np.sqrt(var / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def propagate(taps: np.ndarray, tx_freq: np.ndarray, L_cp: Optional[int] = None,
              noise: Optional[np.ndarray] = None) -> np.ndarray:
    """Send frequency-domain blocks through the time-domain multipath channel.

    taps:    (..., n_tx, n_rx, L) time-domain channel filters
    tx_freq: (..., n_tx, T, N) frequency-domain blocks, T consecutive symbols
    noise:   optional (..., n_rx, T*(N+L_cp)) time-domain noise added at the receiver

    Each transmitter runs IDFT -> CP insertion -> serial stream; every stream is
    linearly convolved with its link filter, superposed at each receiver, noise
    is added, and the receiver strips the CP and applies the DFT. Returns
    (..., n_rx, T, N).
    """
    L = taps.shape[-1]
    T, N = tx_freq.shape[-2:]
    if L_cp is None:
        L_cp = L + 1
    if L_cp <= L:
        raise CyclicPrefixError(f"cyclic prefix {L_cp} must exceed the channel length {L}")
    stream = add_cp(idft(tx_freq), L_cp)
    stream = stream.reshape(stream.shape[:-2] + (T * (N + L_cp),))
    conv = linear_convolve(stream[..., :, None, :], taps)[..., : T * (N + L_cp)]
    rx = conv.sum(axis=-3)
    if noise is not None:
        rx = rx + noise
    blocks = rx.reshape(rx.shape[:-1] + (T, N + L_cp))
    return dft(remove_cp(blocks, L_cp))


def simulate_downlink_frame(taps: np.ndarray, tx_blocks: np.ndarray, noise_var: float,
                            rng: np.random.Generator, L_cp: Optional[int] = None) -> np.ndarray:
    """Downlink through the full waveform path: (M, K, L) taps, (M, T, N) blocks -> (K, T, N).

    ``noise_var`` is the per-subcarrier noise power after the DFT; the
    time-domain samples therefore get variance noise_var / N.
    """
    L = taps.shape[-1]
    T, N = tx_blocks.shape[-2:]
    L_cp = L + 1 if L_cp is None else L_cp
    n_rx = taps.shape[-2]
    noise = None
    if noise_var > 0:
        shape = taps.shape[:-3] + (n_rx, T * (N + L_cp))
        noise = complex_noise(rng, shape, noise_var / N)
    return propagate(taps, tx_blocks, L_cp, noise)
