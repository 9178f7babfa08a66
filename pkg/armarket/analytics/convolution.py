"""
Convolution-recursion oracle for the exponential-noise steady state.

P_m is the density of Σ_{k=0}^{m} λ^k ξ_k, built from P_0 = h by

    P_m(x) = ∫_0^x P_{m-1}(y) f_m(x - y) dy,    f_m(z) = exp(-z/S_m)/S_m,  S_m = a λ^m

P_m is therefore the n = m+1 step distribution of ``finite_time_series``.

Quadrature is a product trapezoid rule on a uniform grid: P_{m-1} is
linearly interpolated between grid points and the exponential kernel is
integrated exactly over each panel. With q = dx/S_m,

    g1 = (1 - (1+q) e^{-q}) / q        g0 = (1 - e^{-q}) - g1
    P_m[i] = Σ_{j=0}^{i} P_{m-1}[i-j] (L_j + R_j) - P_{m-1}[0] R_i
    L_j = e^{-(j-1)q} g1 (j >= 1, L_0 = 0),   R_j = e^{-jq} g0

which gives P_m(0) = 0 exactly and the exact kernel mass even when S_m is
far below the grid spacing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid, trapezoid

from armarket.analytics.series import AnalyticsDomainError
from armarket.noise.spec import NoiseFamily, NoiseSpec

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS: int = 4096

# Grid must reach this many stationary means: x_max >= 20 ⟨ξ⟩ / (1 - λ)
GRID_COVERAGE: float = 20.0

NORMALISATION_WARN: float = 1e-3
NORMALISATION_LIMIT: float = 1e-2


class ResolutionError(RuntimeError):
    """Raised when the quadrature grid cannot hold the normalisation."""
    pass


@dataclass(frozen=True)
class GridSpec:
    """
    Attributes:
        points: Grid points on [0, x_max], >= 2
        x_max : Upper end; None → 20 ⟨ξ⟩ / (1 - λ)
    """

    points: int = DEFAULT_GRID_POINTS
    x_max: Optional[float] = None

    def build(self, xi_mean: float, lam: float) -> np.ndarray:
        if self.points < 2:
            raise ResolutionError(f"grid needs at least 2 points, got {self.points}")
        required = GRID_COVERAGE * xi_mean / (1.0 - lam)
        x_max = required if self.x_max is None else self.x_max
        if x_max < required:
            raise ResolutionError(
                f"grid x_max={x_max:.4g} does not cover 20<xi>/(1-lambda)={required:.4g}"
            )
        return np.linspace(0.0, x_max, self.points)


@dataclass
class TabulatedDensity:
    """
    Density sampled on an increasing grid.

    Attributes:
        grid   : x values (wealth units)
        density: Non-negative density values on the grid
    """

    grid: np.ndarray
    density: np.ndarray

    def integral(self) -> float:
        return float(trapezoid(self.density, self.grid))

    def __call__(self, x) -> np.ndarray:
        """Linear interpolation; 0 outside the grid."""
        return np.interp(x, self.grid, self.density, left=0.0, right=0.0)

    def cdf(self, x) -> np.ndarray:
        cumulative = cumulative_trapezoid(self.density, self.grid, initial=0.0)
        cumulative = np.clip(cumulative / cumulative[-1], 0.0, 1.0)
        return np.interp(x, self.grid, cumulative, left=0.0, right=1.0)

    def mean(self) -> float:
        return float(trapezoid(self.grid * self.density, self.grid))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.grid, "density": self.density})


def _panel_weights(n: int, dx: float, scale: float):
    """Per-offset weights (L_j + R_j) and R_j for the exponential kernel."""
    q = dx / scale
    one_minus = -np.expm1(-q)
    g1 = (one_minus - q * np.exp(-q)) / q
    g0 = one_minus - g1
    j = np.arange(n, dtype=float)
    decay = np.exp(-j * q)
    right = decay * g0
    left = np.zeros(n)
    left[1:] = decay[:-1] * g1
    return left + right, right


def _check_normalisation(m: int, mass: float) -> None:
    drift = abs(mass - 1.0)
    if drift > NORMALISATION_LIMIT:
        raise ResolutionError(
            f"P_{m} normalisation drifted to {mass:.6f}; refine the grid"
        )
    if drift > NORMALISATION_WARN:
        logger.warning("P_%d normalisation %.6f beyond %.0e", m, mass, NORMALISATION_WARN)


def convolution_recursion(
    h: NoiseSpec,
    lam: float,
    m_max: int,
    grid: Optional[GridSpec] = None,
) -> List[TabulatedDensity]:
    """
    Tabulate P_0..P_{m_max} by numerical convolution.

    Args:
        h    : Static exponential noise
        lam  : Savings λ in (0, 1)
        m_max: Last recursion index
        grid : Quadrature grid (default 4096 points on [0, 20 ⟨ξ⟩/(1-λ)])

    Returns:
        Densities indexed by m; element 0 is the base case P_0 = h

    Raises:
        AnalyticsDomainError: Non-exponential or scheduled noise, λ outside (0,1), m_max < 1
        ResolutionError     : Grid too short or normalisation drift above 1e-2
    """
    if h.family is not NoiseFamily.EXPONENTIAL or not h.schedule.is_static:
        raise AnalyticsDomainError("convolution_recursion needs static exponential noise")
    if not 0.0 < lam < 1.0:
        raise AnalyticsDomainError(f"lambda must lie in (0, 1), got {lam}")
    if m_max < 1:
        raise AnalyticsDomainError(f"m_max must be >= 1, got {m_max}")

    grid = grid or GridSpec()
    x = grid.build(h.mean, lam)
    dx = float(x[1] - x[0])
    n = x.size

    current = np.exp(-x / h.mean) / h.mean
    out = [TabulatedDensity(grid=x, density=current)]
    for m in range(1, m_max + 1):
        weights, right = _panel_weights(n, dx, h.mean * lam ** m)
        nxt = np.convolve(current, weights)[:n] - current[0] * right
        nxt[0] = 0.0
        np.maximum(nxt, 0.0, out=nxt)
        density = TabulatedDensity(grid=x, density=nxt)
        _check_normalisation(m, density.integral())
        out.append(density)
        current = nxt

    logger.info(
        "convolution recursion lam=%.3f m_max=%d on %d points (dx=%.3g): final mass %.6f",
        lam, m_max, n, dx, out[-1].integral(),
    )
    return out
