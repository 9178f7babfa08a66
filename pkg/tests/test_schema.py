"""
Tests for the experiment configuration schema and ``--set`` overrides.
"""

import json

import pytest

from armarket.dynamics.kinetic import KineticKind
from armarket.dynamics.population import CapacityKind
from armarket.experiments.overrides import apply_overrides, parse_assignment, set_path
from armarket.experiments.schema import (
    EXPERIMENTS,
    ConfigError,
    experiment_names,
    json_schema,
    load_config,
)
from armarket.noise.spec import NoiseFamily, ScheduleKind


@pytest.mark.unit
class TestLoadConfig:

    def test_minimal_config(self):
        config = load_config({"experiment": "ar-static"})
        assert config.seed == 0
        assert config.noise.family == "exponential"
        assert config.simulation.steps == 100_000

    def test_domain_conversion(self, ar_static_raw):
        config = load_config(ar_static_raw)
        pop = config.population.to_domain()
        assert pop.capacity_law.kind is CapacityKind.CONSTANT
        assert pop.capacity_law.value == pytest.approx(0.6)
        noise = config.noise.to_domain()
        assert noise.family is NoiseFamily.EXPONENTIAL
        sim = config.sim_config()
        assert (sim.steps, sim.burn_in, sim.seed) == (20000, 100, 1)

    def test_gaussian_noise_default_std(self):
        noise = load_config({"experiment": "ar-static", "noise": {"family": "gaussian"}}).noise.to_domain()
        assert noise.family is NoiseFamily.GAUSSIAN
        assert noise.std == 1.0

    @pytest.mark.parametrize("raw,path", [
        ({"experiment": "ar-static", "noise": {"mean": -1.0}}, "noise.mean"),
        ({"experiment": "ar-static", "noise": {"colour": "pink"}}, "noise.colour"),
        ({"experiment": "ar-static", "seed": -3}, "seed"),
        ({"experiment": "ar-static", "population": {"capacity": {"law": "power_alpha", "alpha": 1.5}}},
         "population.capacity.alpha"),
        ({"experiment": "kinetic-ccm", "kinetic": {"n_agents": 1}}, "kinetic.n_agents"),
        ({"experiment": "nonsense"}, "experiment"),
    ])
    def test_errors_carry_field_path(self, raw, path):
        with pytest.raises(ConfigError) as excinfo:
            load_config(raw)
        assert excinfo.value.path == path

    def test_not_an_object(self):
        with pytest.raises(ConfigError):
            load_config(["ar-static"])

    def test_growing_needs_ramp(self):
        with pytest.raises(ConfigError, match="linear_ramp"):
            load_config({"experiment": "ar-growing"})

    def test_ramp_only_for_growing(self):
        raw = {"experiment": "ar-static", "noise": {"schedule": {"kind": "linear_ramp", "horizon": 10}}}
        with pytest.raises(ConfigError):
            load_config(raw)

    def test_ramp_needs_horizon(self):
        with pytest.raises(ConfigError):
            load_config({"experiment": "ar-growing", "noise": {"schedule": {"kind": "linear_ramp"}}})

    def test_ramp_converts(self):
        config = load_config({"experiment": "ar-growing", "noise": {"schedule": {"kind": "linear_ramp", "horizon": 20}}})
        schedule = config.noise.to_domain().schedule
        assert schedule.kind is ScheduleKind.LINEAR_RAMP
        assert schedule.horizon == 20

    def test_burn_in_below_steps(self):
        with pytest.raises(ConfigError):
            load_config({"experiment": "ar-static", "simulation": {"steps": 10, "burn_in": 10}})

    def test_constant_law_needs_value(self):
        with pytest.raises(ConfigError):
            load_config({"experiment": "ar-static", "population": {"capacity": {"law": "constant"}}})

    def test_value_and_savings_exclusive(self):
        capacity = {"law": "constant", "value": 0.5, "savings": 0.5}
        with pytest.raises(ConfigError):
            load_config({"experiment": "ar-static", "population": {"capacity": capacity}})

    def test_stationary_mean_start(self):
        config = load_config({"experiment": "pareto-sweep", "population": {"initial_wealth": "stationary_mean"}})
        assert config.population.to_domain().initial_wealth == "stationary_mean"


@pytest.mark.unit
class TestKineticConfig:

    def test_tagged_defaults_to_first_agent(self):
        config = load_config({"experiment": "kinetic-ccm", "kinetic": {"tagged_savings": 0.4}})
        assert config.kinetic.tagged_agent == 0
        model = config.kinetic.to_domain(KineticKind.CCM)
        assert model.tagged_savings == 0.4

    def test_tagged_out_of_range(self):
        with pytest.raises(ConfigError):
            load_config({"experiment": "kinetic-ccm", "kinetic": {"n_agents": 10, "tagged": 10}})

    def test_total_wealth(self):
        config = load_config({"experiment": "kinetic-cc", "kinetic": {"n_agents": 50, "mean_wealth": 2.0, "savings": 0.3}})
        assert config.kinetic.total_wealth == 100.0
        assert config.kinetic.to_domain(KineticKind.CC).savings == 0.3

    def test_pool_every_positive(self):
        with pytest.raises(ConfigError):
            load_config({"experiment": "kinetic-ccm", "kinetic": {"pool_every": 0}})


@pytest.mark.unit
class TestDerivedViews:

    def test_hash_ignores_output_section(self, ar_static_raw):
        a = load_config({**ar_static_raw, "output": {"name": "first"}})
        b = load_config({**ar_static_raw, "output": {"dir": "/tmp/elsewhere"}})
        assert a.config_hash() == b.config_hash()

    def test_hash_tracks_seed(self, ar_static_raw):
        assert load_config(ar_static_raw).config_hash() != load_config({**ar_static_raw, "seed": 2}).config_hash()

    def test_canonical_json_round_trips(self, ar_static_raw):
        config = load_config(ar_static_raw)
        again = load_config(json.loads(config.canonical_json()))
        assert again.config_hash() == config.config_hash()

    def test_json_schema(self):
        schema = json_schema()
        assert "experiment" in schema["properties"]
        assert set(experiment_names()) == set(EXPERIMENTS)
        assert len(EXPERIMENTS) == 9


@pytest.mark.unit
class TestShippedConfigs:

    def test_every_example_config_validates(self, configs_dir):
        paths = sorted(configs_dir.glob("*.json"))
        assert paths
        for path in paths:
            config = load_config(json.loads(path.read_text(encoding="utf-8")))
            assert config.experiment in EXPERIMENTS


@pytest.mark.unit
class TestOverrides:

    @pytest.mark.parametrize("item,expected", [
        ("noise.mean=2", ("noise.mean", 2)),
        ("population.capacity.law=power_alpha", ("population.capacity.law", "power_alpha")),
        ("simulation.burn_in=null", ("simulation.burn_in", None)),
        ("analysis.tail_k=500", ("analysis.tail_k", 500)),
        ("output.name=a=b", ("output.name", "a=b")),
    ])
    def test_parse_assignment(self, item, expected):
        assert parse_assignment(item) == expected

    @pytest.mark.parametrize("item", ["noise.mean", "=3"])
    def test_malformed_assignment(self, item):
        with pytest.raises(ConfigError):
            parse_assignment(item)

    def test_set_path_creates_sections(self):
        doc = {}
        set_path(doc, "population.capacity.alpha", 0.5)
        assert doc == {"population": {"capacity": {"alpha": 0.5}}}

    def test_cannot_descend_into_scalar(self):
        with pytest.raises(ConfigError) as excinfo:
            set_path({"noise": 3}, "noise.mean", 1.0)
        assert excinfo.value.path == "noise"

    def test_apply_overrides_copies(self, ar_static_raw):
        updated = apply_overrides(ar_static_raw, ["noise.mean=2.5", "seed=9"])
        assert updated["noise"]["mean"] == 2.5
        assert updated["seed"] == 9
        assert ar_static_raw["noise"]["mean"] == 1.0
        assert load_config(updated).noise.mean == 2.5
