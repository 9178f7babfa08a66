"""
Empirical distributions and Kolmogorov-Smirnov distances.

EmpiricalDistribution is the universal output of every simulator. Samples
are kept in recorded order (batch-means error bars depend on it) and a
sorted view is cached on first use.

Histogram conventions:
- linear : 200 uniform bins on [min(0, x_min), 99.5th percentile]
- log    : 20 bins per decade between the smallest positive sample and x_max
Samples outside the plotted range are counted in ``underflow`` / ``overflow``
so that counts + underflow + overflow == n.

Example usage:
    >>> import numpy as np
    >>> from armarket.estimation.empirical import EmpiricalDistribution, ks_distance
    >>> emp = EmpiricalDistribution(np.array([0.5]))
    >>> ks_distance(emp, lambda x: np.full_like(x, 0.5))
    0.5
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

import numpy as np
import pandas as pd
from scipy import stats

# Monotonicity slack for reference CDFs evaluated in floating point
_CDF_MONOTONE_TOL = 1e-12

# 1% critical value of the one-sample KS statistic: D_crit ≈ 1.63 / sqrt(n)
KS_CRITICAL_1PCT = 1.63


class ReferenceDistributionError(ValueError):
    """Raised when a reference CDF is not a valid (monotone, [0,1]) CDF."""
    pass


@dataclass
class Histogram:
    """
    Binned view of an empirical distribution.

    Attributes:
        edges    : Bin edges, length bins + 1
        counts   : Samples per bin
        underflow: Samples below edges[0]
        overflow : Samples above edges[-1]
        n        : Total sample count
    """

    edges: np.ndarray
    counts: np.ndarray
    underflow: int
    overflow: int
    n: int

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def density(self) -> np.ndarray:
        """Counts normalised by n and bin width (comparable with a PDF)."""
        return self.counts / (self.n * self.widths)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "bin_left": self.edges[:-1],
            "bin_right": self.edges[1:],
            "density": self.density,
        })


class EmpiricalDistribution:
    """
    Finite sample of a (wealth or noise) distribution.

    Args:
        samples: 1-D array of samples in recorded order
    """

    def __init__(self, samples: Iterable[float]) -> None:
        self.samples = np.asarray(samples, dtype=float).ravel()

    def __len__(self) -> int:
        return self.samples.size

    def __repr__(self) -> str:
        return f"EmpiricalDistribution(n={self.count})"

    @property
    def count(self) -> int:
        return int(self.samples.size)

    @cached_property
    def sorted(self) -> np.ndarray:
        return np.sort(self.samples)

    @classmethod
    def merge(cls, parts: Iterable["EmpiricalDistribution"]) -> "EmpiricalDistribution":
        """Concatenate per-replica buffers in the given (replica-index) order."""
        arrays = [p.samples for p in parts]
        if not arrays:
            return cls(np.empty(0))
        return cls(np.concatenate(arrays))

    def quantile(self, q: float) -> float:
        return float(np.quantile(self.samples, q))

    def histogram(self, bins: int = 200, upper_quantile: float = 0.995) -> Histogram:
        """Uniform bins on [min(0, x_min), upper quantile]."""
        lower = min(0.0, float(self.sorted[0]))
        upper = float(np.quantile(self.sorted, upper_quantile))
        if upper <= lower:
            upper = lower + 1.0
        edges = np.linspace(lower, upper, bins + 1)
        return self._bin(edges)

    def log_histogram(self, per_decade: int = 20) -> Histogram:
        """Logarithmic bins between the smallest positive sample and x_max."""
        positive = self.sorted[self.sorted > 0.0]
        if positive.size == 0:
            raise ValueError("log histogram needs positive samples")
        lo, hi = np.log10(positive[0]), np.log10(positive[-1])
        n_bins = max(1, int(np.ceil((hi - lo) * per_decade)))
        edges = np.logspace(lo, hi if hi > lo else lo + 1.0 / per_decade, n_bins + 1)
        return self._bin(edges)

    def _bin(self, edges: np.ndarray) -> Histogram:
        counts, _ = np.histogram(self.samples, bins=edges)
        underflow = int(np.searchsorted(self.sorted, edges[0], side="left"))
        overflow = int(self.count - np.searchsorted(self.sorted, edges[-1], side="right"))
        return Histogram(
            edges=edges,
            counts=counts,
            underflow=underflow,
            overflow=overflow,
            n=self.count,
        )


def ks_distance(emp: EmpiricalDistribution, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """
    One-sample Kolmogorov-Smirnov distance sup|F_n - F|.

    Uses the two-sided step convention: at the i-th order statistic both
    i/n - F(x_(i)) and F(x_(i)) - (i-1)/n are considered.

    Args:
        emp: Empirical distribution (n >= 1)
        cdf: Vectorised reference CDF

    Returns:
        KS distance in [0, 1]

    Raises:
        ValueError                : If the sample is empty
        ReferenceDistributionError: If cdf values are outside [0, 1] or decrease
    """
    n = emp.count
    if n < 1:
        raise ValueError("ks_distance needs at least one sample")
    x = emp.sorted
    f = np.asarray(cdf(x), dtype=float)
    if f.shape != x.shape:
        raise ReferenceDistributionError("reference cdf must be vectorised over samples")
    if np.any(~np.isfinite(f)) or f.min() < -_CDF_MONOTONE_TOL or f.max() > 1.0 + _CDF_MONOTONE_TOL:
        raise ReferenceDistributionError("reference cdf values must lie in [0, 1]")
    if n > 1 and np.any(np.diff(f) < -_CDF_MONOTONE_TOL):
        raise ReferenceDistributionError("reference cdf is not monotone on the sample range")
    i = np.arange(1, n + 1, dtype=float)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1.0) / n)
    return float(max(d_plus, d_minus, 0.0))


def ks_two_sample(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    """Two-sample KS statistic between two empirical distributions."""
    if a.count < 1 or b.count < 1:
        raise ValueError("ks_two_sample needs non-empty samples")
    return float(stats.ks_2samp(a.samples, b.samples, method="asymp").statistic)


def effective_sample_size(n: int, lam: float) -> float:
    """n_eff = n(1-λ)/(1+λ) for AR(1) output with coefficient λ."""
    return n * (1.0 - lam) / (1.0 + lam)


def ks_threshold(n_eff: float) -> float:
    """1% critical KS distance for an effective sample size."""
    return KS_CRITICAL_1PCT / np.sqrt(n_eff)
