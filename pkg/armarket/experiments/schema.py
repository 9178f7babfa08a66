"""
Experiment configuration schema.

A run is described by one JSON document validated by ``ExperimentConfig``.
Nested models mirror the domain objects and convert to them with
``to_domain()``; the published JSON schema comes from
``ExperimentConfig.model_json_schema()`` (``armarket schema``).

Validation failures are re-raised as ``ConfigError`` carrying the dotted
path of the offending field.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from armarket.dynamics.kinetic import KineticKind, KineticModel
from armarket.dynamics.population import MU_MIN, CapacityLaw, PopulationSpec, SimConfig
from armarket.noise.spec import MeanSchedule, NoiseFamily, NoiseSpec, ScheduleKind

EXPERIMENTS = (
    "ar-static",
    "ar-growing",
    "ar-annealed",
    "kinetic-ccm",
    "kinetic-cc",
    "kinetic-generic",
    "kinetic-yakovenko",
    "pareto-sweep",
    "analytic-curves",
)

ExperimentName = Literal[
    "ar-static",
    "ar-growing",
    "ar-annealed",
    "kinetic-ccm",
    "kinetic-cc",
    "kinetic-generic",
    "kinetic-yakovenko",
    "pareto-sweep",
    "analytic-curves",
]

KINETIC_KINDS = {
    "kinetic-ccm": KineticKind.CCM,
    "kinetic-cc": KineticKind.CC,
    "kinetic-generic": KineticKind.GENERIC,
    "kinetic-yakovenko": KineticKind.YAKOVENKO,
}


class ConfigError(ValueError):
    """
    Raised when an experiment configuration does not validate.

    Attributes:
        path: Dotted path of the offending field ("" for the whole document)
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ScheduleConfig(_Section):
    kind: Literal["constant", "linear_ramp"] = "constant"
    horizon: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _ramp_needs_horizon(self) -> "ScheduleConfig":
        if self.kind == "linear_ramp" and self.horizon is None:
            raise ValueError("linear_ramp schedule needs a horizon")
        return self

    def to_domain(self) -> MeanSchedule:
        return MeanSchedule(kind=ScheduleKind(self.kind), horizon=self.horizon)


class NoiseConfig(_Section):
    family: Literal["exponential", "gaussian"] = "exponential"
    mean: float = Field(default=1.0, gt=0.0)
    std: Optional[float] = Field(default=None, gt=0.0)
    schedule: ScheduleConfig = Field(default_factory=ScheduleConfig)

    def to_domain(self) -> NoiseSpec:
        if self.family == "exponential":
            return NoiseSpec.exponential(mean=self.mean, schedule=self.schedule.to_domain())
        return NoiseSpec(
            family=NoiseFamily.GAUSSIAN,
            mean=self.mean,
            std=self.std if self.std is not None else 1.0,
            schedule=self.schedule.to_domain(),
        )


class CapacityConfig(_Section):
    """Capacity law g(μ); ``savings`` is a shortcut for constant μ = 1 - λ."""

    law: Literal["uniform", "power_alpha", "constant"] = "uniform"
    alpha: float = Field(default=0.0, ge=0.0, lt=1.0)
    value: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    savings: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    floor: float = Field(default=MU_MIN, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _constant_needs_value(self) -> "CapacityConfig":
        if self.law == "constant" and self.value is None and self.savings is None:
            raise ValueError("constant capacity law needs 'value' (μ) or 'savings' (λ)")
        if self.value is not None and self.savings is not None:
            raise ValueError("give either 'value' or 'savings', not both")
        return self

    def to_domain(self) -> CapacityLaw:
        if self.law == "uniform":
            return CapacityLaw.uniform(floor=self.floor)
        if self.law == "power_alpha":
            return CapacityLaw.power_alpha(self.alpha, floor=self.floor)
        if self.savings is not None:
            return CapacityLaw.from_savings(self.savings)
        return CapacityLaw.constant(self.value)


class PopulationConfig(_Section):
    count: int = Field(default=1, ge=1)
    capacity: CapacityConfig = Field(default_factory=CapacityConfig)
    initial_wealth: Union[float, Literal["stationary_mean"]] = 1.0

    def to_domain(self) -> PopulationSpec:
        return PopulationSpec(
            count=self.count,
            capacity_law=self.capacity.to_domain(),
            initial_wealth=self.initial_wealth,
        )


class SimulationConfig(_Section):
    steps: int = Field(default=100_000, ge=1)
    burn_in: Optional[int] = Field(default=None, ge=0)
    stride: int = Field(default=1, ge=1)
    replicas: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _burn_in_below_steps(self) -> "SimulationConfig":
        if self.burn_in is not None and self.burn_in >= self.steps:
            raise ValueError(f"burn_in ({self.burn_in}) must be smaller than steps ({self.steps})")
        return self

    def to_domain(self, seed: int) -> SimConfig:
        return SimConfig(
            steps=self.steps,
            burn_in=self.burn_in,
            stride=self.stride,
            seed=seed,
            replicas=self.replicas,
        )


class KineticConfig(_Section):
    """
    Kinetic exchange set-up. Total wealth is ``n_agents * mean_wealth``.
    ``tagged`` defaults to agent 0 when ``tagged_savings`` is given.
    ``pool_every`` thins pooled wealth and noise records for long runs.
    """

    n_agents: int = Field(default=100, ge=2)
    mean_wealth: float = Field(default=1.0, gt=0.0)
    savings: float = Field(default=0.0, ge=0.0, lt=1.0)
    savings_law: CapacityConfig = Field(default_factory=CapacityConfig)
    tagged: Optional[int] = Field(default=None, ge=0)
    tagged_savings: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    pool_every: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _tagged_in_range(self) -> "KineticConfig":
        if self.tagged is not None and self.tagged >= self.n_agents:
            raise ValueError(f"tagged agent {self.tagged} outside 0..{self.n_agents - 1}")
        return self

    @property
    def total_wealth(self) -> float:
        return self.n_agents * self.mean_wealth

    @property
    def tagged_agent(self) -> Optional[int]:
        if self.tagged is None and self.tagged_savings is not None:
            return 0
        return self.tagged

    def to_domain(self, kind: KineticKind) -> KineticModel:
        if kind is KineticKind.CCM:
            return KineticModel.ccm(self.savings_law.to_domain(), tagged_savings=self.tagged_savings)
        if kind is KineticKind.CC:
            return KineticModel.cc(self.savings)
        if kind is KineticKind.GENERIC:
            return KineticModel.generic()
        return KineticModel.yakovenko()


class AnalysisConfig(_Section):
    """Estimator settings shared by every experiment."""

    bins: int = Field(default=200, ge=1)
    upper_quantile: float = Field(default=0.995, gt=0.0, le=1.0)
    log_per_decade: int = Field(default=20, ge=1)
    series_order: int = Field(default=12, ge=1)
    tail_k: Optional[int] = Field(default=None, ge=1)
    batches: int = Field(default=50, ge=10)


class SweepConfig(_Section):
    """Pareto sweep: AR average wealths or CCM long-run means."""

    source: Literal["ar", "ccm"] = "ar"


class AnalyticConfig(_Section):
    lam: float = Field(default=0.4, gt=0.0, lt=1.0)
    order: int = Field(default=4, ge=1)
    x_max: float = Field(default=6.0, gt=0.0)
    points: int = Field(default=601, ge=2)
    oracle_order: int = Field(default=12, ge=1)
    grid_points: int = Field(default=4096, ge=2)
    alpha0: float = 1.0
    sigma0: float = Field(default=1.0, gt=0.0)


class OutputConfig(_Section):
    dir: Optional[str] = None
    name: Optional[str] = None


class ExperimentConfig(_Section):
    """
    Full description of one run.

    Only the sections the chosen experiment reads matter; the others keep
    their defaults and are still embedded in every output header.
    """

    experiment: ExperimentName
    seed: int = 0
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    population: PopulationConfig = Field(default_factory=PopulationConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    kinetic: KineticConfig = Field(default_factory=KineticConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    analytic: AnalyticConfig = Field(default_factory=AnalyticConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @field_validator("seed")
    @classmethod
    def _seed_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("seed must be non-negative")
        return v

    @model_validator(mode="after")
    def _schedule_matches_experiment(self) -> "ExperimentConfig":
        ramp = self.noise.schedule.kind == "linear_ramp"
        if self.experiment == "ar-growing" and not ramp:
            raise ValueError("ar-growing needs noise.schedule.kind = 'linear_ramp'")
        if self.experiment != "ar-growing" and ramp:
            raise ValueError(f"{self.experiment} needs a constant noise schedule")
        return self

    # -- derived views -----------------------------------------------------

    def resolved(self) -> Dict[str, Any]:
        """JSON view of the run-defining fields (everything but ``output``)."""
        return self.model_dump(mode="json", exclude={"output"})

    def canonical_json(self) -> str:
        return json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def sim_config(self) -> SimConfig:
        return self.simulation.to_domain(self.seed)


def _format_path(loc: tuple) -> str:
    return ".".join(str(part) for part in loc)


def load_config(raw: Dict[str, Any]) -> ExperimentConfig:
    """
    Validate a raw JSON document.

    Raises:
        ConfigError: On the first validation failure, with its field path
    """
    if not isinstance(raw, dict):
        raise ConfigError("experiment configuration must be a JSON object")
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(first["msg"], path=_format_path(first["loc"])) from exc


def json_schema() -> Dict[str, Any]:
    return ExperimentConfig.model_json_schema()


def experiment_names() -> List[str]:
    return list(EXPERIMENTS)


__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "KINETIC_KINDS",
    "experiment_names",
    "json_schema",
    "load_config",
]
