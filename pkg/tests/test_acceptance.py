"""
Desk-scale reproduction runs on the shipped configs.

Each test takes from several seconds to a couple of minutes; they are
deselected by default. Run with:

    pytest -m slow
"""

import json

import pytest

from armarket.analytics.series import series_coefficients
from armarket.experiments.compare import compare
from armarket.experiments.overrides import apply_overrides
from armarket.experiments.runner import ExperimentRunner, run_experiment
from armarket.experiments.schema import load_config

pytestmark = pytest.mark.slow


@pytest.fixture
def shipped(configs_dir):
    def _load(name, *overrides):
        raw = json.loads((configs_dir / f"{name}.json").read_text(encoding="utf-8"))
        return load_config(apply_overrides(raw, list(overrides)))
    return _load


def _summary(config):
    return ExperimentRunner(config).run().summary


class TestArAcceptance:

    def test_static_market_matches_series(self, shipped):
        summary = _summary(shipped("fig1_ar_static"))
        assert summary["ks"]["reference"].startswith("series:lam=0.4,order=4")
        assert summary["ks"]["ks"] < 0.01

    @pytest.mark.parametrize("savings", [0.25, 0.5, 0.75])
    def test_gaussian_fixed_point(self, shipped, savings):
        summary = _summary(shipped("gaussian_fixed_point", f"population.capacity.savings={savings}"))
        wealth = summary["wealth"]
        assert abs(wealth["mean"] - 1.0 / (1.0 - savings)) < 4.0 * wealth["standard_error"]
        assert wealth["std"] == pytest.approx((1.0 - savings ** 2) ** -0.5, rel=0.01)

    def test_mean_wealth_law(self, shipped):
        summary = _summary(shipped("mean_wealth_law"))
        assert summary["mean_wealth_law"]["fraction_within_4se"] >= 0.99

    def test_pareto_uniform(self, shipped):
        assert abs(_summary(shipped("pareto_uniform"))["gamma_hat"] - 2.0) < 0.15

    def test_pareto_power_alpha(self, shipped):
        assert abs(_summary(shipped("pareto_power_alpha"))["gamma_hat"] - 2.5) < 0.2

    def test_growing_market_converges(self, shipped):
        ks_200 = _summary(shipped("fig2_growing_T200"))["ks"]["ks"]
        ks_20 = _summary(shipped("fig2_growing_T20"))["ks"]["ks"]
        assert ks_200 < 0.02
        assert ks_20 > ks_200

    def test_annealed(self, shipped):
        summary = _summary(shipped("annealed"))
        assert summary["ks"]["ks"] < 0.01
        assert summary["wealth"]["mean"] == pytest.approx(2.0, abs=0.01)


class TestKineticAcceptance:

    def test_generic_model(self, shipped):
        summary = _summary(shipped("fig4_generic"))
        assert summary["ks"]["ks"] < 0.01
        assert summary["noise_ks"]["ks"] < 0.01
        assert summary["relative_drift"] < 1e-6

    def test_yakovenko(self, shipped):
        summary = _summary(shipped("yakovenko"))
        assert summary["ks"]["ks"] < 0.01
        assert summary["relative_drift"] < 1e-6

    def test_cc_without_savings_is_exponential(self, shipped):
        assert _summary(shipped("cc_lambda0"))["ks"]["ks"] < 0.01

    def test_tagged_ccm_agent_behaves_like_cc(self, shipped, tmp_path):
        ccm = run_experiment(shipped("fig3_ccm_tagged", "simulation.steps=220000"), tmp_path / "ccm")
        tagged = ccm.summary["tagged"]
        assert tagged["wealth"]["mean"] == pytest.approx(0.198, rel=0.05)
        assert tagged["wealth"]["mean"] == pytest.approx(tagged["expected_mean"], rel=0.05)

        # the CC market is normalised to the measured tagged mean
        measured = tagged["wealth"]["mean"]
        run_experiment(
            shipped("fig3_cc", "simulation.steps=200200", f"kinetic.mean_wealth={measured!r}"),
            tmp_path / "cc",
        )
        assert compare(tmp_path / "ccm", str(tmp_path / "cc"), tolerances={"ks": 0.02}).ok
        assert compare(tmp_path / "ccm", str(tmp_path / "cc"), quantity="noise", tolerances={"ks": 0.02}).ok

    def test_ccm_average_wealth_tail(self, shipped):
        summary = _summary(shipped("pareto_ccm"))
        assert abs(summary["gamma_hat"] - 2.0) < 0.3
        assert summary["rank_correlation"] > 0.95


class TestAnalyticAcceptance:

    @pytest.mark.parametrize("lam", [0.2, 0.4, 0.6])
    def test_series_invariants(self, lam):
        dist = series_coefficients(lam, 12)
        assert abs(dist.boundary_residual()) < 1e-6
        assert abs(dist.normalisation() - 1.0) < 1e-6
        assert abs(dist.first_moment() - 1.0 / (1.0 - lam)) < 1e-5

    @pytest.mark.parametrize("lam", [0.2, 0.4, 0.6])
    def test_oracle_cross_check(self, shipped, lam):
        oracle = _summary(shipped("analytic_curves", f"analytic.lam={lam}"))["oracle"]
        assert oracle["max_abs_diff_finite"] < 1e-3
        assert oracle["agrees"] is True
