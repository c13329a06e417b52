"""Empirical CDFs and quantiles over Monte Carlo samples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EmpiricalCdf:
    values: np.ndarray  # sorted samples

    def __call__(self, x):
        """Right-continuous F(x) = #{samples <= x} / n."""
        return np.searchsorted(self.values, x, side="right") / self.values.size

    @property
    def n(self) -> int:
        return self.values.size

    def table(self, points: int = 1000) -> np.ndarray:
        """(points, 2) array of (x, F(x)) on an even grid spanning the sample range."""
        x = np.linspace(self.values[0], self.values[-1], points)
        return np.column_stack([x, self(x)])


def build_cdf(samples) -> EmpiricalCdf:
    values = np.sort(np.asarray(samples, dtype=float).ravel())
    if values.size == 0:
        raise ValueError("cannot build a CDF from an empty sample")
    return EmpiricalCdf(values)


def percentile(cdf: EmpiricalCdf, p: float) -> float:
    """Quantile by linear interpolation between order statistics (numpy's 'linear').

    The 95%-likely rate is percentile(cdf, 0.05).
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    return float(np.quantile(cdf.values, p))
