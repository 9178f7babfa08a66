"""
Closed-form reference densities.

- Gaussian fixed point: Gaussian noise (α₀, σ₀) gives a Gaussian steady
  state with α = α₀/(1-λ), σ = σ₀/sqrt(1-λ²)
- Gamma family Γ_n(x) = x^{n-1} e^{-x} / Γ(n): Γ₂ is the exact steady
  state of the annealed-λ AR model and of the generic two-noise exchange
- CC approximate reference: Γ_n with n = (1+2λ)/(1-λ), scaled to a mean
- Pareto law for the average wealth w = ⟨ξ⟩/μ of a population with
  capacity density g(μ):  P(w) = ⟨ξ⟩ g(⟨ξ⟩/w) / w²

All functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from typing import Tuple, Union

import numpy as np
from scipy import stats

from armarket.analytics.series import AnalyticsDomainError
from armarket.dynamics.population import CapacityKind, CapacityLaw

ArrayLike = Union[float, np.ndarray]


def _scalar_or_array(out: np.ndarray) -> ArrayLike:
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def _require_non_negative(x: ArrayLike, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise AnalyticsDomainError(f"{what} is defined for x >= 0 only")
    return arr


# ---------------------------------------------------------------------------
# Gaussian
# ---------------------------------------------------------------------------

def gaussian_fixed_point(alpha0: float, sigma0: float, lam: float) -> Tuple[float, float]:
    """
    Stationary (mean, std) of x' = λx + ξ with ξ ~ N(α₀, σ₀²).

    Raises:
        AnalyticsDomainError: λ outside [0, 1) or σ₀ <= 0
    """
    if not 0.0 <= lam < 1.0:
        raise AnalyticsDomainError(f"lambda must lie in [0, 1), got {lam}")
    if not sigma0 > 0.0:
        raise AnalyticsDomainError(f"sigma0 must be positive, got {sigma0}")
    return alpha0 / (1.0 - lam), sigma0 / math.sqrt(1.0 - lam * lam)


def gaussian_pdf(x: ArrayLike, mean: float, std: float) -> ArrayLike:
    return _scalar_or_array(stats.norm.pdf(x, loc=mean, scale=std))


def gaussian_cdf(x: ArrayLike, mean: float, std: float) -> ArrayLike:
    return _scalar_or_array(stats.norm.cdf(x, loc=mean, scale=std))


# ---------------------------------------------------------------------------
# Exponential and Gamma
# ---------------------------------------------------------------------------

def exponential_pdf(x: ArrayLike, mean: float = 1.0) -> ArrayLike:
    return _scalar_or_array(stats.expon.pdf(x, scale=mean))


def exponential_cdf(x: ArrayLike, mean: float = 1.0) -> ArrayLike:
    return _scalar_or_array(stats.expon.cdf(x, scale=mean))


def _check_shape(n: float) -> None:
    if not n > 0.0:
        raise AnalyticsDomainError(f"gamma shape must be positive, got {n}")


def gamma_pdf(n: float, x: ArrayLike, scale: float = 1.0) -> ArrayLike:
    """
    Γ_n density x^{n-1} e^{-x} / Γ(n) (continuous n), optionally rescaled.

    Raises:
        AnalyticsDomainError: n <= 0 or any x < 0
    """
    _check_shape(n)
    arr = _require_non_negative(x, "gamma density")
    return _scalar_or_array(stats.gamma.pdf(arr, a=n, scale=scale))


def gamma_cdf(n: float, x: ArrayLike, scale: float = 1.0) -> ArrayLike:
    _check_shape(n)
    return _scalar_or_array(stats.gamma.cdf(x, a=n, scale=scale))


def cc_gamma_shape(lam: float) -> float:
    """n = (1+2λ)/(1-λ) of the approximate Gamma fit to the CC model."""
    if not 0.0 <= lam < 1.0:
        raise AnalyticsDomainError(f"lambda must lie in [0, 1), got {lam}")
    return (1.0 + 2.0 * lam) / (1.0 - lam)


def cc_reference_pdf(lam: float, x: ArrayLike, mean: float = 1.0) -> ArrayLike:
    """
    Approximate CC steady state: Γ_n with n = (1+2λ)/(1-λ), mean ``mean``.

    Labelled reference only; the Gamma form is not exact for λ > 0.
    """
    n = cc_gamma_shape(lam)
    return gamma_pdf(n, x, scale=mean / n)


def cc_reference_cdf(lam: float, x: ArrayLike, mean: float = 1.0) -> ArrayLike:
    n = cc_gamma_shape(lam)
    return gamma_cdf(n, x, scale=mean / n)


# ---------------------------------------------------------------------------
# Capacities and the Pareto law
# ---------------------------------------------------------------------------

def _require_continuous(law: CapacityLaw) -> None:
    if law.kind is CapacityKind.CONSTANT:
        raise AnalyticsDomainError(
            "a constant capacity law has no density; every agent has w = <xi>/mu"
        )


def capacity_density(law: CapacityLaw, mu: ArrayLike) -> ArrayLike:
    """Normalised g(μ) on (μ_min, 1]; zero outside."""
    _require_continuous(law)
    mu = np.asarray(mu, dtype=float)
    inside = (mu >= law.floor) & (mu <= 1.0)
    if law.kind is CapacityKind.UNIFORM:
        g = np.full(mu.shape, 1.0 / (1.0 - law.floor))
    else:
        p = law.alpha + 1.0
        g = p * np.power(np.where(inside, mu, 1.0), law.alpha) / (1.0 - law.floor ** p)
    return _scalar_or_array(np.where(inside, g, 0.0))


def capacity_cdf(law: CapacityLaw, mu: ArrayLike) -> ArrayLike:
    _require_continuous(law)
    mu = np.clip(np.asarray(mu, dtype=float), law.floor, 1.0)
    if law.kind is CapacityKind.UNIFORM:
        out = (mu - law.floor) / (1.0 - law.floor)
    else:
        p = law.alpha + 1.0
        lo = law.floor ** p
        out = (mu ** p - lo) / (1.0 - lo)
    return _scalar_or_array(out)


def pareto_support(law: CapacityLaw, xi_mean: float) -> Tuple[float, float]:
    """[⟨ξ⟩, ⟨ξ⟩/μ_min]: the range of w = ⟨ξ⟩/μ."""
    return xi_mean, xi_mean / law.lower


def pareto_density(law: CapacityLaw, xi_mean: float, w: ArrayLike) -> ArrayLike:
    """
    Density of the average wealth w = ⟨ξ⟩/μ; zero outside the support.

    Raises:
        AnalyticsDomainError: Constant capacity law or xi_mean <= 0
    """
    _require_continuous(law)
    if not xi_mean > 0.0:
        raise AnalyticsDomainError(f"xi_mean must be positive, got {xi_mean}")
    w = np.asarray(w, dtype=float)
    safe = np.where(w > 0.0, w, 1.0)
    mu = xi_mean / safe
    density = xi_mean * np.asarray(capacity_density(law, mu)) / safe ** 2
    return _scalar_or_array(np.where(w > 0.0, density, 0.0))


def pareto_cdf(law: CapacityLaw, xi_mean: float, w: ArrayLike) -> ArrayLike:
    """P(W <= w) = 1 - G(⟨ξ⟩/w) with G the capacity CDF."""
    _require_continuous(law)
    if not xi_mean > 0.0:
        raise AnalyticsDomainError(f"xi_mean must be positive, got {xi_mean}")
    w = np.asarray(w, dtype=float)
    safe = np.where(w > 0.0, w, 1.0)
    out = 1.0 - np.asarray(capacity_cdf(law, xi_mean / safe))
    return _scalar_or_array(np.where(w > 0.0, out, 0.0))
