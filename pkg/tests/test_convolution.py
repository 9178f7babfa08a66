"""
Tests for the convolution-recursion oracle.
"""

import numpy as np
import pytest

from armarket.analytics.convolution import (
    DEFAULT_GRID_POINTS,
    GridSpec,
    ResolutionError,
    TabulatedDensity,
    convolution_recursion,
)
from armarket.analytics.series import AnalyticsDomainError, finite_time_series, series_coefficients
from armarket.noise.spec import MeanSchedule, NoiseSpec, ScheduleKind


@pytest.fixture(scope="module")
def recursion_04():
    return convolution_recursion(NoiseSpec.exponential(), 0.4, 11)


@pytest.mark.unit
class TestConvolutionRecursion:

    def test_returns_base_case_and_steps(self, recursion_04):
        assert len(recursion_04) == 12
        base = recursion_04[0]
        assert base.grid.size == DEFAULT_GRID_POINTS
        np.testing.assert_allclose(base.density, np.exp(-base.grid))

    def test_grid_covers_stationary_mean(self, recursion_04):
        assert recursion_04[0].grid[-1] == pytest.approx(20.0 / 0.6)

    def test_boundary_and_mass(self, recursion_04):
        for density in recursion_04[1:]:
            assert density.density[0] == 0.0
            assert density.density.min() >= 0.0
            assert density.integral() == pytest.approx(1.0, abs=1e-3)

    def test_matches_finite_time_series(self, recursion_04):
        # P_m is the (m+1)-step distribution
        for m in (1, 3, 5, 11):
            exact = finite_time_series(0.4, m + 1).evaluate(recursion_04[m].grid)
            assert np.max(np.abs(exact - recursion_04[m].density)) < 1e-3

    @pytest.mark.parametrize("lam", [0.2, 0.4, 0.6])
    def test_twelve_term_series_agrees_with_recursion(self, lam):
        last = convolution_recursion(NoiseSpec.exponential(), lam, 11)[-1]
        exact = finite_time_series(lam, 12).evaluate(last.grid)
        assert np.max(np.abs(exact - last.density)) < 1e-3

    def test_approaches_stationary_series(self, recursion_04):
        last = recursion_04[-1]
        stationary = series_coefficients(0.4, 12).evaluate(last.grid)
        assert np.max(np.abs(stationary - last.density)) < 5e-3
        assert last.mean() == pytest.approx(1.0 / 0.6, abs=1e-2)

    def test_noise_mean_scales_grid(self):
        out = convolution_recursion(NoiseSpec.exponential(mean=2.0), 0.5, 3, GridSpec(points=2048))
        assert out[0].grid[-1] == pytest.approx(80.0)
        assert out[-1].mean() == pytest.approx(2.0 * (1 + 0.5 + 0.25 + 0.125), rel=1e-2)

    def test_non_exponential_noise_rejected(self):
        with pytest.raises(AnalyticsDomainError):
            convolution_recursion(NoiseSpec.gaussian(), 0.4, 3)

    def test_scheduled_noise_rejected(self):
        noise = NoiseSpec.exponential(schedule=MeanSchedule(kind=ScheduleKind.LINEAR_RAMP, horizon=5))
        with pytest.raises(AnalyticsDomainError):
            convolution_recursion(noise, 0.4, 3)

    @pytest.mark.parametrize("lam,m_max", [(0.0, 3), (1.0, 3), (0.4, 0)])
    def test_invalid_arguments(self, lam, m_max):
        with pytest.raises(AnalyticsDomainError):
            convolution_recursion(NoiseSpec.exponential(), lam, m_max)

    def test_high_lambda_allowed(self):
        out = convolution_recursion(NoiseSpec.exponential(), 0.95, 2)
        assert out[-1].integral() == pytest.approx(1.0, abs=5e-3)


@pytest.mark.unit
class TestGrid:

    def test_short_grid_rejected(self):
        with pytest.raises(ResolutionError):
            GridSpec(points=1024, x_max=10.0).build(1.0, 0.4)

    def test_too_few_points(self):
        with pytest.raises(ResolutionError):
            GridSpec(points=1).build(1.0, 0.4)

    def test_coarse_grid_loses_normalisation(self):
        with pytest.raises(ResolutionError):
            convolution_recursion(NoiseSpec.exponential(), 0.4, 3, GridSpec(points=2))


@pytest.mark.unit
class TestTabulatedDensity:

    def test_exponential_table(self):
        grid = np.linspace(0.0, 40.0, 4001)
        table = TabulatedDensity(grid=grid, density=np.exp(-grid))
        assert table.integral() == pytest.approx(1.0, abs=1e-4)
        assert table.mean() == pytest.approx(1.0, abs=1e-3)
        assert table(1.0) == pytest.approx(np.exp(-1.0), rel=1e-4)
        assert table(-1.0) == 0.0
        assert table.cdf(0.0) == 0.0
        assert table.cdf(100.0) == 1.0
        assert table.cdf(1.0) == pytest.approx(1.0 - np.exp(-1.0), abs=1e-4)
        assert list(table.to_frame().columns) == ["x", "density"]
