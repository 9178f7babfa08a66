"""Statistical layer: empirical distributions, goodness of fit, moments, tail fits."""

from armarket.estimation.empirical import (
    EmpiricalDistribution,
    Histogram,
    ReferenceDistributionError,
    effective_sample_size,
    ks_distance,
    ks_threshold,
    ks_two_sample,
)
from armarket.estimation.moments import Moments, batch_standard_error, moments
from armarket.estimation.tail import (
    EstimationDomainError,
    TailFitResult,
    tail_exponent,
    tail_sensitivity,
)

__all__ = [
    "EmpiricalDistribution",
    "Histogram",
    "ReferenceDistributionError",
    "effective_sample_size",
    "ks_distance",
    "ks_threshold",
    "ks_two_sample",
    "Moments",
    "batch_standard_error",
    "moments",
    "EstimationDomainError",
    "TailFitResult",
    "tail_exponent",
    "tail_sensitivity",
]
