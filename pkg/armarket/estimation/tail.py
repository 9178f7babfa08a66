"""
Pareto tail-exponent estimation.

Hill maximum-likelihood estimator on the top k order statistics:

    γ̂ = 1 + k / Σ_{i=1..k} ln(w_(n-i+1) / w_(n-k))
    se = (γ̂ - 1) / sqrt(k)

γ̂ is reported as the DENSITY exponent (P(w) ~ w^-γ), i.e. one plus the
CDF tail index. Default k is the top decile; ``tail_sensitivity`` repeats
the fit at n/20 and n/5 so the bias/variance trade-off stays visible.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Dict, Optional

import numpy as np

from armarket.estimation.empirical import EmpiricalDistribution

logger = logging.getLogger(__name__)

MIN_TAIL_SAMPLES: int = 100
SENSITIVITY_FRACTIONS = (20, 10, 5)


class EstimationDomainError(ValueError):
    """Raised when a sample cannot support the requested estimator."""
    pass


@dataclass
class TailFitResult:
    """
    Attributes:
        gamma_hat: Estimated density exponent γ
        std_err  : Asymptotic standard error of γ̂
        k        : Number of top order statistics used
        w_min    : Fit threshold w_(n-k)
    """

    gamma_hat: float
    std_err: float
    k: int
    w_min: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def tail_exponent(emp: EmpiricalDistribution, k: Optional[int] = None) -> TailFitResult:
    """
    Hill estimate of the Pareto density exponent.

    Args:
        emp: Sample of (average) wealths, n >= 100
        k  : Top order statistics to use (default n // 10)

    Raises:
        EstimationDomainError: Too few samples, k out of range, non-positive
                               values in the tail window, or zero log-spacings
    """
    n = emp.count
    if n < MIN_TAIL_SAMPLES:
        raise EstimationDomainError(f"tail fit needs at least {MIN_TAIL_SAMPLES} samples, got {n}")
    if k is None:
        k = n // 10
    if not 1 <= k < n:
        raise EstimationDomainError(f"k must lie in [1, n-1], got {k}")

    ordered = emp.sorted
    w_min = float(ordered[n - k - 1])
    top = ordered[n - k:]
    if w_min <= 0.0:
        raise EstimationDomainError(f"tail window contains non-positive values (threshold {w_min})")

    log_spacing = float(np.sum(np.log(top / w_min)))
    if log_spacing <= 0.0:
        raise EstimationDomainError("tail window has zero log-spacings (all samples equal)")

    gamma_hat = 1.0 + k / log_spacing
    result = TailFitResult(
        gamma_hat=gamma_hat,
        std_err=(gamma_hat - 1.0) / np.sqrt(k),
        k=int(k),
        w_min=w_min,
    )
    logger.debug("Hill fit n=%d k=%d gamma=%.4f", n, k, gamma_hat)
    return result


def tail_sensitivity(emp: EmpiricalDistribution) -> Dict[str, TailFitResult]:
    """Hill fits at k = n/20, n/10 and n/5 keyed by ``"n/20"`` etc."""
    return {
        f"n/{d}": tail_exponent(emp, k=max(1, emp.count // d))
        for d in SENSITIVITY_FRACTIONS
    }
