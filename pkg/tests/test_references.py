"""
Tests for command-line reference distributions and run-directory I/O.
"""

import json

import numpy as np
import pytest

from armarket.experiments import artifacts
from armarket.experiments.references import is_reference, parse_reference
from armarket.experiments.schema import ConfigError, load_config


@pytest.mark.unit
class TestParseReference:

    def test_series(self):
        ref = parse_reference("series:lam=0.4,order=12")
        assert ref.label == "series:lam=0.4,order=12,mean=1.0"
        assert ref.mean == pytest.approx(1.0 / 0.6)
        assert ref.lower == 0.0
        f = ref.cdf(np.linspace(0.0, 30.0, 301))
        assert f[0] == 0.0
        assert f[-1] == pytest.approx(1.0)
        assert np.all(np.diff(f) >= -1e-9)

    def test_gamma(self):
        ref = parse_reference("gamma:n=2,scale=0.5")
        assert ref.mean == pytest.approx(1.0)
        assert ref.pdf(np.array([-1.0]))[0] == 0.0

    def test_exponential_default_mean(self):
        ref = parse_reference("exp:")
        assert ref.mean == 1.0
        assert ref.cdf(np.array([1.0]))[0] == pytest.approx(1.0 - np.exp(-1.0))

    def test_gauss_has_unbounded_support(self):
        ref = parse_reference("gauss:mean=2,std=1.1547")
        assert ref.lower is None
        assert ref.cdf(np.array([2.0]))[0] == pytest.approx(0.5)

    def test_pareto(self):
        ref = parse_reference("pareto:law=uniform,floor=0.01,xi_mean=1")
        assert ref.mean is None
        assert ref.cdf(np.array([1.0, 100.0])).tolist() == pytest.approx([0.0, 1.0])

    def test_pareto_power_alpha_needs_alpha(self):
        with pytest.raises(ConfigError):
            parse_reference("pareto:law=power_alpha")

    def test_cc(self):
        ref = parse_reference("cc:lam=0.4,mean=2")
        assert ref.mean == 2.0
        assert ref.cdf(np.array([1e4]))[0] == pytest.approx(1.0)

    @pytest.mark.parametrize("text", [
        "weibull:k=2",
        "series",
        "series:order=12",
        "series:lam=abc",
        "series:lam=0.4,order",
        "series:lam=0.95",
        "gamma:n=0",
        "pareto:law=triangle",
    ])
    def test_malformed(self, text):
        with pytest.raises(ConfigError):
            parse_reference(text)

    def test_is_reference(self):
        assert is_reference("series:lam=0.4")
        assert is_reference("gauss:mean=1,std=1")
        assert not is_reference("runs/fig1")
        assert not is_reference("runs:fig1")


@pytest.mark.unit
class TestArtifacts:

    def test_dumps_is_deterministic(self):
        text = artifacts.dumps({"b": np.float64(1.5), "a": np.arange(2), "c": np.int64(3)})
        assert text == '{\n  "a": [\n    0,\n    1\n  ],\n  "b": 1.5,\n  "c": 3\n}\n'

    def test_dumps_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            artifacts.dumps({"a": object()})

    def test_csv_with_metadata(self, tmp_path, ar_static_raw):
        import pandas as pd

        config = load_config(ar_static_raw)
        frame = pd.DataFrame({"x": [0.0, 0.5], "density": [0.0, 1.0 / 3.0]})
        path = artifacts.write_csv(tmp_path / "curve.csv", frame, config)

        meta = artifacts.read_csv_metadata(path)
        assert meta["experiment"] == "ar-static"
        assert meta["seed"] == "1"
        assert meta["config_sha256"] == config.config_hash()
        assert json.loads(meta["config"]) == config.resolved()

        back = artifacts.read_csv(path)
        assert list(back.columns) == ["x", "density"]
        assert back["density"].iloc[1] == pytest.approx(1.0 / 3.0, rel=1e-9)

    def test_samples_round_trip(self, tmp_path, ar_static_raw):
        config = load_config(ar_static_raw)
        artifacts.write_samples(tmp_path / artifacts.SAMPLES_FILE, np.array([1.0, 2.0]), config,
                                noise=np.array([0.5]))
        arrays = artifacts.load_samples(tmp_path)
        np.testing.assert_array_equal(arrays["samples"], [1.0, 2.0])
        np.testing.assert_array_equal(arrays["noise"], [0.5])
        assert str(arrays["config"]) == config.canonical_json()

    def test_samples_without_noise(self, tmp_path, ar_static_raw):
        config = load_config(ar_static_raw)
        artifacts.write_samples(tmp_path / artifacts.SAMPLES_FILE, np.array([1.0]), config)
        assert "noise" not in artifacts.load_samples(tmp_path)

    def test_prepare_run_dir_nested(self, tmp_path):
        path = artifacts.prepare_run_dir(tmp_path / "a" / "b")
        assert path.is_dir()

    def test_json_round_trip(self, tmp_path):
        path = artifacts.write_json(tmp_path / "x.json", {"k": [1, 2]})
        assert artifacts.read_json(path) == {"k": [1, 2]}
