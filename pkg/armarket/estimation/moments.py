"""
Sample moments with batch-means error bars.

Simulation output is autocorrelated, so the naive i.i.d. standard error
under-reports the uncertainty of a time-series mean. The sample is split
into contiguous batches (default 50); the standard error is the spread of
the batch means divided by sqrt(n_batches). The mean itself is always the
plain arithmetic mean of all samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from armarket.estimation.empirical import EmpiricalDistribution

DEFAULT_BATCHES: int = 50
MIN_BATCHES: int = 10


@dataclass
class Moments:
    """
    Attributes:
        mean          : Arithmetic mean
        std           : Sample standard deviation (ddof=1)
        standard_error: Batch-means standard error of the mean
        n             : Sample count
        n_batches     : Batches used for the error bar
    """

    mean: float
    std: float
    standard_error: float
    n: int
    n_batches: int


def batch_standard_error(samples: np.ndarray, n_batches: int = DEFAULT_BATCHES, axis: int = -1) -> np.ndarray:
    """
    Batch-means standard error along ``axis``.

    Works row-wise on a 2-D array, so per-agent error bars come from one
    call. Trailing samples that do not fill a whole batch are ignored.
    """
    samples = np.moveaxis(np.asarray(samples, dtype=float), axis, -1)
    n = samples.shape[-1]
    n_batches = min(n_batches, n)
    if n_batches < MIN_BATCHES:
        raise ValueError(f"need at least {MIN_BATCHES} samples for batch means, got {n}")
    size = n // n_batches
    batched = samples[..., : size * n_batches].reshape(*samples.shape[:-1], n_batches, size)
    batch_means = batched.mean(axis=-1)
    return batch_means.std(axis=-1, ddof=1) / np.sqrt(n_batches)


def moments(emp: EmpiricalDistribution, n_batches: int = DEFAULT_BATCHES) -> Moments:
    """
    Mean, standard deviation and batch-means standard error.

    Raises:
        ValueError: If fewer than 10 samples are available
    """
    x = emp.samples
    if x.size < MIN_BATCHES:
        raise ValueError(f"moments need at least {MIN_BATCHES} samples, got {x.size}")
    used = min(n_batches, x.size)
    return Moments(
        mean=float(np.mean(x)),
        std=float(np.std(x, ddof=1)),
        standard_error=float(batch_standard_error(x, used)),
        n=int(x.size),
        n_batches=used,
    )
