"""
Exact steady state of the AR model under exponential noise.

With x = Σ_{k>=0} λ^k ξ_k and ξ ~ exp(mean a), the Laplace transform is
∏_{k>=0} (1 + a λ^k s)^{-1}. Its partial-fraction expansion gives

    P(x) = Σ_{m>=1} C_m exp(-x / (a s_m)) / a,     s_m = λ^{m-1}
    C_m^{-1} = λ^{m-1} ∏_{n>=1, n!=m} (1 - λ^{n-m})

so that, for the infinite series,

    Σ C_m         = 0              (P(0) = 0)
    Σ C_m s_m     = 1              (normalisation)
    Σ C_m s_m^2   = 1 / (1 - λ)    (mean ⟨ξ⟩/μ)

The leading term m=1 is exp(-x), the λ → 0 limit. Signs of C_m alternate.
Keeping only the products over n in {1..n_steps} gives the exact
distribution after ``n_steps`` updates from x=0 (``finite_time_series``).

For λ close to 1 the factors (1 - λ^k) are tiny and the C_m huge with
alternating signs; evaluation is refused above λ = 0.9.

Example usage:
    >>> from armarket.analytics.series import series_coefficients, series_pdf
    >>> dist = series_coefficients(0.4, 12)
    >>> abs(dist.boundary_residual()) < 1e-9
    True
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

logger = logging.getLogger(__name__)

MAX_SERIES_LAMBDA: float = 0.9

# Infinite products stop once the next factor is within this of 1
PRODUCT_CUTOFF: float = 1e-15

# Rounding-level negatives at x=0 are clamped silently
NEGATIVE_LOG_FLOOR: float = 1e-12

ArrayLike = Union[float, np.ndarray]


class AnalyticsDomainError(ValueError):
    """Raised when an analytic formula is evaluated outside its domain."""
    pass


@dataclass(frozen=True)
class SeriesDistribution:
    """
    Truncated exponential-noise steady state.

    Attributes:
        lam         : Savings λ in (0, 0.9]
        order       : Number of terms M
        coefficients: C_1..C_M
        scales      : s_1..s_M = λ^0..λ^{M-1}
        mean        : Noise mean ⟨ξ⟩; x is measured in units of it
        finite_steps: Set when the series is the exact n-step distribution
    """

    lam: float
    order: int
    coefficients: np.ndarray
    scales: np.ndarray
    mean: float = 1.0
    finite_steps: Union[int, None] = None

    def evaluate(self, x: ArrayLike) -> np.ndarray:
        """Raw series value Σ C_m exp(-x/(a s_m))/a; may dip below 0 near x=0."""
        x = np.asarray(x, dtype=float)
        u = x[..., None] / (self.mean * self.scales)
        return np.exp(-u) @ self.coefficients / self.mean

    def cdf(self, x: ArrayLike) -> np.ndarray:
        """Σ C_m s_m (1 - exp(-x/(a s_m))), clipped to [0, 1]."""
        x = np.asarray(x, dtype=float)
        # negative x would overflow expm1 for the small scales
        u = np.maximum(x, 0.0)[..., None] / (self.mean * self.scales)
        raw = (-np.expm1(-u)) @ (self.coefficients * self.scales)
        return np.clip(np.where(x > 0.0, raw, 0.0), 0.0, 1.0)

    def boundary_residual(self) -> float:
        """Σ C_m (the raw density at x=0 in units of 1/a)."""
        return float(self.coefficients.sum())

    def normalisation(self) -> float:
        return float(self.coefficients @ self.scales)

    def first_moment(self) -> float:
        """Σ C_m s_m^2 (mean in units of a)."""
        return float(self.coefficients @ self.scales ** 2)

    def rescaled(self, mean: float) -> "SeriesDistribution":
        """Same coefficients for a noise mean ``mean``."""
        if mean <= 0.0:
            raise AnalyticsDomainError(f"noise mean must be positive, got {mean}")
        return SeriesDistribution(
            lam=self.lam,
            order=self.order,
            coefficients=self.coefficients,
            scales=self.scales,
            mean=mean,
            finite_steps=self.finite_steps,
        )


def _check_lambda(lam: float) -> None:
    if not 0.0 < lam < 1.0:
        raise AnalyticsDomainError(f"lambda must lie in (0, 1), got {lam}")
    if lam > MAX_SERIES_LAMBDA:
        raise AnalyticsDomainError(
            f"series evaluation refused for lambda={lam} > {MAX_SERIES_LAMBDA} "
            "(catastrophic cancellation); use convolution_recursion instead"
        )


def _tail_product_length(lam: float) -> int:
    """Largest k with λ^k >= PRODUCT_CUTOFF."""
    return int(np.floor(np.log(PRODUCT_CUTOFF) / np.log(lam)))


def _coefficients(lam: float, order: int, upper: Union[int, None]) -> np.ndarray:
    """
    C_m for m = 1..order with the product over n in {1..upper}\\{m}
    (upper=None → infinite product, truncated at the machine cutoff).

    Computed as sign * exp(-log|C_m^{-1}|): the n < m factors are negative
    and large, so magnitudes are carried in log space.
    """
    log_lam = np.log(lam)
    tail_len = _tail_product_length(lam)
    coefficients = np.empty(order)
    for m in range(1, order + 1):
        below = np.arange(1, m)  # factors 1 - λ^{-(m-n)}, all negative
        log_mag = (m - 1) * log_lam + np.sum(np.log(np.expm1(-(m - below) * log_lam)))
        above_len = tail_len if upper is None else upper - m
        if above_len > 0:
            k = np.arange(1, above_len + 1)
            log_mag += np.sum(np.log1p(-lam ** k))
        sign = -1.0 if (m - 1) % 2 else 1.0
        coefficients[m - 1] = sign * np.exp(-log_mag)
    return coefficients


def series_coefficients(lam: float, order: int, mean: float = 1.0) -> SeriesDistribution:
    """
    Stationary series truncated after ``order`` terms.

    Raises:
        AnalyticsDomainError: λ outside (0, 0.9], order < 1, mean <= 0
    """
    _check_lambda(lam)
    if order < 1:
        raise AnalyticsDomainError(f"series order must be >= 1, got {order}")
    if mean <= 0.0:
        raise AnalyticsDomainError(f"noise mean must be positive, got {mean}")
    dist = SeriesDistribution(
        lam=lam,
        order=order,
        coefficients=_coefficients(lam, order, None),
        scales=lam ** np.arange(order, dtype=float),
        mean=mean,
    )
    logger.debug(
        "series lam=%.3f M=%d: sum C=%.3e norm-1=%.3e",
        lam, order, dist.boundary_residual(), dist.normalisation() - 1.0,
    )
    return dist


def finite_time_series(lam: float, n_steps: int, mean: float = 1.0) -> SeriesDistribution:
    """
    Exact distribution of x after ``n_steps`` updates started from x=0,
    i.e. of Σ_{k<n_steps} λ^k ξ_k.

    Raises:
        AnalyticsDomainError: λ outside (0, 0.9], n_steps < 1, mean <= 0
    """
    _check_lambda(lam)
    if n_steps < 1:
        raise AnalyticsDomainError(f"n_steps must be >= 1, got {n_steps}")
    if mean <= 0.0:
        raise AnalyticsDomainError(f"noise mean must be positive, got {mean}")
    return SeriesDistribution(
        lam=lam,
        order=n_steps,
        coefficients=_coefficients(lam, n_steps, n_steps),
        scales=lam ** np.arange(n_steps, dtype=float),
        mean=mean,
        finite_steps=n_steps,
    )


def series_pdf(dist: SeriesDistribution, x: ArrayLike) -> ArrayLike:
    """
    Density clamped at 0.

    Truncation makes the raw value slightly negative near x=0 at small M;
    those points are clamped and logged. Use ``dist.evaluate`` for raw values.

    Raises:
        AnalyticsDomainError: If any x < 0
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise AnalyticsDomainError("series density is defined for x >= 0 only")
    raw = dist.evaluate(arr)
    negative = raw < 0.0
    if np.any(raw < -NEGATIVE_LOG_FLOOR):
        logger.warning(
            "series (lam=%.3f, M=%d) negative at %d point(s), min %.3e; clamped to 0",
            dist.lam, dist.order, int(np.count_nonzero(negative)), float(raw.min()),
        )
    out = np.where(negative, 0.0, raw)
    return float(out) if out.ndim == 0 else out


def series_cdf(dist: SeriesDistribution, x: ArrayLike) -> np.ndarray:
    """Reference CDF for KS comparisons."""
    return dist.cdf(x)
