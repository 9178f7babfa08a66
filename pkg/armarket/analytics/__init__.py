"""Analytic and semi-analytic steady-state distributions."""

from armarket.analytics.convolution import (
    GridSpec,
    ResolutionError,
    TabulatedDensity,
    convolution_recursion,
)
from armarket.analytics.densities import (
    capacity_cdf,
    capacity_density,
    cc_gamma_shape,
    cc_reference_cdf,
    cc_reference_pdf,
    exponential_cdf,
    exponential_pdf,
    gamma_cdf,
    gamma_pdf,
    gaussian_cdf,
    gaussian_fixed_point,
    gaussian_pdf,
    pareto_cdf,
    pareto_density,
    pareto_support,
)
from armarket.analytics.series import (
    AnalyticsDomainError,
    SeriesDistribution,
    finite_time_series,
    series_cdf,
    series_coefficients,
    series_pdf,
)

__all__ = [
    "GridSpec",
    "ResolutionError",
    "TabulatedDensity",
    "convolution_recursion",
    "capacity_cdf",
    "capacity_density",
    "cc_gamma_shape",
    "cc_reference_cdf",
    "cc_reference_pdf",
    "exponential_cdf",
    "exponential_pdf",
    "gamma_cdf",
    "gamma_pdf",
    "gaussian_cdf",
    "gaussian_fixed_point",
    "gaussian_pdf",
    "pareto_cdf",
    "pareto_density",
    "pareto_support",
    "AnalyticsDomainError",
    "SeriesDistribution",
    "finite_time_series",
    "series_cdf",
    "series_coefficients",
    "series_pdf",
]
