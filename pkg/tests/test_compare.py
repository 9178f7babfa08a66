"""
Tests for run-vs-run and run-vs-reference comparisons.
"""

import numpy as np
import pytest

from armarket.experiments.compare import (
    DEFAULT_TOLERANCES,
    ComparisonError,
    compare,
    load_run_samples,
    parse_tolerances,
)
from armarket.experiments.schema import ConfigError


@pytest.mark.unit
class TestParseTolerances:

    def test_default(self):
        assert parse_tolerances(None) == DEFAULT_TOLERANCES
        assert parse_tolerances([]) == {"ks": 0.02}

    def test_several(self):
        assert parse_tolerances(["ks=0.01", "mean=0.05"]) == {"ks": 0.01, "mean": 0.05}

    @pytest.mark.parametrize("item", ["ks", "ks=small"])
    def test_malformed(self, item):
        with pytest.raises(ConfigError):
            parse_tolerances([item])


@pytest.mark.unit
class TestCompareWithReference:

    def test_exponential_sample_passes(self, fake_run, exp_samples):
        run = fake_run("exp", exp_samples)
        report = compare(run, "exp:mean=1")
        assert report.target == "exp:mean=1.0"
        assert report.ok
        assert report.metrics["mean"] < 0.05
        assert report.passed == {"ks": True}

    def test_zero_tolerance_fails(self, fake_run, exp_samples):
        report = compare(fake_run("exp", exp_samples), "exp:mean=1", tolerances={"ks": 0.0})
        assert not report.ok
        assert report.to_dict()["ok"] is False

    def test_wrong_reference_fails(self, fake_run, exp_samples):
        report = compare(fake_run("exp", exp_samples), "gamma:n=2")
        assert report.metrics["ks"] > 0.1
        assert not report.ok

    def test_pareto_reference_has_no_mean(self, fake_run, rng):
        w = (1.0 - rng.random(5000)) ** -1.0
        report = compare(fake_run("tail", w[w < 100.0]), "pareto:law=uniform,floor=0.01", tolerances={})
        assert "mean" not in report.metrics
        assert report.ok

    def test_unknown_metric(self, fake_run, exp_samples):
        with pytest.raises(ComparisonError):
            compare(fake_run("exp", exp_samples), "exp:mean=1", tolerances={"median": 0.1})

    def test_samples_below_support(self, fake_run, rng):
        run = fake_run("gauss", rng.normal(size=1000))
        with pytest.raises(ComparisonError):
            compare(run, "exp:mean=1")

    def test_gaussian_reference_accepts_negative_samples(self, fake_run, rng):
        run = fake_run("gauss", rng.normal(2.0, 1.0, size=5000))
        assert compare(run, "gauss:mean=2,std=1").ok

    def test_malformed_reference(self, fake_run, exp_samples):
        with pytest.raises(ConfigError):
            compare(fake_run("exp", exp_samples), "series:lam=2")


@pytest.mark.unit
class TestCompareRuns:

    def test_run_against_itself(self, fake_run, exp_samples):
        run = fake_run("a", exp_samples)
        report = compare(run, str(run), tolerances={"ks": 0.0, "mean": 0.0})
        assert report.metrics == {"ks": 0.0, "mean": 0.0}
        assert report.ok

    def test_noise_quantity(self, fake_run, rng):
        a = fake_run("a", rng.exponential(size=100), noise=rng.exponential(size=4000))
        b = fake_run("b", rng.exponential(size=100), noise=rng.exponential(size=4000))
        report = compare(a, str(b), quantity="noise", tolerances={"ks": 0.05})
        assert report.quantity == "noise"
        assert report.ok

    def test_missing_noise(self, fake_run, exp_samples):
        a = fake_run("a", exp_samples)
        with pytest.raises(ComparisonError, match="noise"):
            compare(a, str(a), quantity="noise")

    def test_not_a_run_directory(self, tmp_path, fake_run, exp_samples):
        a = fake_run("a", exp_samples)
        with pytest.raises(ComparisonError):
            compare(a, str(tmp_path / "nowhere"))

    def test_unknown_quantity(self, fake_run, exp_samples):
        with pytest.raises(ComparisonError):
            load_run_samples(fake_run("a", exp_samples), "price")

    def test_loaded_samples(self, fake_run):
        emp = load_run_samples(fake_run("a", np.array([3.0, 1.0, 2.0])), "wealth")
        np.testing.assert_array_equal(emp.sorted, [1.0, 2.0, 3.0])
