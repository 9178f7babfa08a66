"""
Population and run configuration shared by the AR and kinetic simulators.

An agent i carries an investment capacity μ_i in (0, 1] (savings
λ_i = 1 - μ_i). Capacities are drawn once per population from g(μ):

- UNIFORM      : g(μ) uniform on (μ_min, 1]
- POWER_ALPHA  : g(μ) ∝ μ^α on (μ_min, 1], 0 <= α < 1
- CONSTANT     : every agent has the same μ

The floor μ_min (default 1e-3) bounds w = ⟨ξ⟩/μ and the burn-in while
leaving three decades of Pareto tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

MU_MIN: float = 1e-3

# 20 e-foldings of the slowest geometric mode λ_max^n
BURN_IN_EFOLDS: float = 20.0

# Burn-in for dynamics whose λ is redrawn every step (E[λ]=1/2, memory ~ e^-n)
ANNEALED_BURN_IN: int = 200

STATIONARY_MEAN = "stationary_mean"


class ConfigurationError(ValueError):
    """Raised when a population, run or model configuration is invalid."""
    pass


class CapacityKind(Enum):
    """Family of the capacity distribution g(μ)."""
    UNIFORM = "uniform"
    POWER_ALPHA = "power_alpha"
    CONSTANT = "constant"


@dataclass(frozen=True)
class CapacityLaw:
    """
    Capacity distribution g(μ).

    Attributes:
        kind : Distribution family
        alpha: Exponent for POWER_ALPHA, in [0, 1)
        value: Shared μ for CONSTANT, in (0, 1]
        floor: Lower support bound μ_min for UNIFORM / POWER_ALPHA
    """

    kind: CapacityKind = CapacityKind.UNIFORM
    alpha: float = 0.0
    value: float = 1.0
    floor: float = MU_MIN

    def __post_init__(self) -> None:
        if self.kind is CapacityKind.POWER_ALPHA and not 0.0 <= self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.kind is CapacityKind.CONSTANT and not 0.0 < self.value <= 1.0:
            raise ConfigurationError(f"constant capacity must lie in (0, 1], got {self.value}")
        if not 0.0 < self.floor < 1.0:
            raise ConfigurationError(f"capacity floor must lie in (0, 1), got {self.floor}")

    @classmethod
    def uniform(cls, floor: float = MU_MIN) -> "CapacityLaw":
        return cls(kind=CapacityKind.UNIFORM, floor=floor)

    @classmethod
    def power_alpha(cls, alpha: float, floor: float = MU_MIN) -> "CapacityLaw":
        return cls(kind=CapacityKind.POWER_ALPHA, alpha=alpha, floor=floor)

    @classmethod
    def constant(cls, value: float) -> "CapacityLaw":
        return cls(kind=CapacityKind.CONSTANT, value=value)

    @classmethod
    def from_savings(cls, savings: float) -> "CapacityLaw":
        """Constant law for a shared savings propensity λ (μ = 1 - λ)."""
        return cls.constant(1.0 - savings)

    @property
    def lower(self) -> float:
        """Smallest capacity the law can produce."""
        if self.kind is CapacityKind.CONSTANT:
            return self.value
        return self.floor

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``n`` capacities in (μ_min, 1] by inverse-CDF sampling."""
        if self.kind is CapacityKind.CONSTANT:
            return np.full(n, self.value)
        u = 1.0 - rng.random(n)  # (0, 1]
        if self.kind is CapacityKind.UNIFORM:
            return self.floor + (1.0 - self.floor) * u
        p = self.alpha + 1.0
        lo = self.floor ** p
        return (lo + u * (1.0 - lo)) ** (1.0 / p)


@dataclass(frozen=True)
class PopulationSpec:
    """
    Attributes:
        count         : Number of agents N (per replica)
        capacity_law  : Distribution g(μ) of investment capacities
        initial_wealth: Starting wealth per agent, or ``"stationary_mean"``
                        to start every agent at ⟨ξ⟩/μ_i
    """

    count: int = 1
    capacity_law: CapacityLaw = CapacityLaw.uniform()
    initial_wealth: Union[float, str] = 1.0

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigurationError(f"population count must be positive, got {self.count}")
        if isinstance(self.initial_wealth, str) and self.initial_wealth != STATIONARY_MEAN:
            raise ConfigurationError(
                f"initial_wealth must be a number or '{STATIONARY_MEAN}', got {self.initial_wealth!r}"
            )

    def initial_state(self, capacities: np.ndarray, xi_mean: float) -> np.ndarray:
        """Starting wealth vector for the given capacities."""
        if self.initial_wealth == STATIONARY_MEAN:
            return xi_mean / capacities
        return np.full(capacities.shape, float(self.initial_wealth))


@dataclass(frozen=True)
class SimConfig:
    """
    Attributes:
        steps   : Total update steps (AR) or sweeps (kinetic)
        burn_in : Steps discarded before sampling; None → model default
        stride  : Sampling interval after burn-in
        seed    : Master RNG seed
        replicas: Independent seeded work units (annealed, growing, kinetic)
    """

    steps: int
    burn_in: Optional[int] = None
    stride: int = 1
    seed: int = 0
    replicas: int = 1

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ConfigurationError(f"steps must be positive, got {self.steps}")
        if self.stride < 1:
            raise ConfigurationError(f"stride must be >= 1, got {self.stride}")
        if self.replicas < 1:
            raise ConfigurationError(f"replicas must be >= 1, got {self.replicas}")
        if self.burn_in is not None:
            if self.burn_in < 0:
                raise ConfigurationError(f"burn_in must be non-negative, got {self.burn_in}")
            if self.burn_in >= self.steps:
                raise ConfigurationError(
                    f"burn_in ({self.burn_in}) must be smaller than steps ({self.steps})"
                )

    def resolve_burn_in(self, default: int) -> int:
        """Configured burn-in, or ``default`` (checked against steps)."""
        burn_in = default if self.burn_in is None else self.burn_in
        if burn_in >= self.steps:
            raise ConfigurationError(
                f"default burn-in {burn_in} leaves no samples for {self.steps} steps; "
                "raise steps or set burn_in explicitly"
            )
        return burn_in

    def sample_count(self, burn_in: int) -> int:
        """Number of recorded steps t in (burn_in, steps] at the configured stride."""
        return (self.steps - burn_in - 1) // self.stride + 1


def default_burn_in(lambda_max: float) -> int:
    """ceil(20 / (1 - λ_max)) steps."""
    if not 0.0 <= lambda_max < 1.0:
        raise ConfigurationError(f"lambda_max must lie in [0, 1), got {lambda_max}")
    return int(math.ceil(BURN_IN_EFOLDS / (1.0 - lambda_max)))
