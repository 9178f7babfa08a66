"""
Market-return noise ξ.

The market returns every agent a stochastic net gain ξ(t) drawn from a PDF
h(ξ). Two families are supported:

- EXPONENTIAL : h(ξ) = exp(-ξ/a)/a, strictly non-negative draws
- GAUSSIAN    : normal with mean a and standard deviation ``std``; negative
                draws are kept (negative wealth is read as debt)

The mean a may follow a schedule a(t). A LINEAR_RAMP schedule grows the mean
as a(t) = mean * t / horizon for t in 1..horizon, so a(horizon) == mean.

Example usage:
    >>> import numpy as np
    >>> from armarket.noise.spec import NoiseSpec, sample_noise
    >>> spec = NoiseSpec.exponential(mean=1.0)
    >>> rng = np.random.default_rng(7)
    >>> sample_noise(spec, t=1, rng=rng) >= 0.0
    True
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np


class ScheduleDomainError(ValueError):
    """Raised when a time step lies outside the domain of a mean schedule."""
    pass


class NoiseFamily(Enum):
    """Distribution family of ξ."""
    EXPONENTIAL = "exponential"
    GAUSSIAN = "gaussian"


class ScheduleKind(Enum):
    """Time dependence of the market mean a(t)."""
    CONSTANT = "constant"
    LINEAR_RAMP = "linear_ramp"


@dataclass(frozen=True)
class MeanSchedule:
    """
    Time-varying market mean.

    Attributes:
        kind   : CONSTANT or LINEAR_RAMP
        horizon: Ramp length T in steps (required for LINEAR_RAMP)
    """

    kind: ScheduleKind = ScheduleKind.CONSTANT
    horizon: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is ScheduleKind.LINEAR_RAMP:
            if self.horizon is None or self.horizon < 1:
                raise ValueError(
                    f"LINEAR_RAMP schedule needs a positive integer horizon, got {self.horizon}"
                )

    @property
    def is_static(self) -> bool:
        return self.kind is ScheduleKind.CONSTANT

    def factor(self, t: int) -> float:
        """
        Multiplier applied to the base mean at step ``t``.

        Raises:
            ScheduleDomainError: If t is outside 1..horizon for a ramp
        """
        if self.kind is ScheduleKind.CONSTANT:
            return 1.0
        if not 1 <= t <= self.horizon:
            raise ScheduleDomainError(
                f"time step {t} outside ramp domain 1..{self.horizon}"
            )
        return t / self.horizon


@dataclass(frozen=True)
class NoiseSpec:
    """
    Specification of the market-return distribution h(ξ, t).

    Attributes:
        family  : EXPONENTIAL or GAUSSIAN
        mean    : Static mean ⟨ξ⟩ (a), must be positive
        std     : Gaussian σ₀; ignored for EXPONENTIAL where std == mean
        schedule: Mean schedule; CONSTANT keeps a(t) == mean
    """

    family: NoiseFamily = NoiseFamily.EXPONENTIAL
    mean: float = 1.0
    std: float = 1.0
    schedule: MeanSchedule = field(default_factory=MeanSchedule)

    def __post_init__(self) -> None:
        if not self.mean > 0.0:
            raise ValueError(f"noise mean must be positive, got {self.mean}")
        if self.family is NoiseFamily.GAUSSIAN and not self.std > 0.0:
            raise ValueError(f"gaussian std must be positive, got {self.std}")

    @classmethod
    def exponential(cls, mean: float = 1.0, schedule: Optional[MeanSchedule] = None) -> "NoiseSpec":
        return cls(
            family=NoiseFamily.EXPONENTIAL,
            mean=mean,
            std=mean,
            schedule=schedule or MeanSchedule(),
        )

    @classmethod
    def gaussian(cls, mean: float = 1.0, std: float = 1.0) -> "NoiseSpec":
        return cls(family=NoiseFamily.GAUSSIAN, mean=mean, std=std)

    @property
    def effective_std(self) -> float:
        """Standard deviation of a static draw."""
        if self.family is NoiseFamily.EXPONENTIAL:
            return self.mean
        return self.std

    def mean_at(self, t: int) -> float:
        """Market mean a(t) at step ``t``."""
        return self.mean * self.schedule.factor(t)


def draw_noise(
    spec: NoiseSpec,
    t: int,
    rng: np.random.Generator,
    size: Union[int, tuple, None] = None,
) -> Union[float, np.ndarray]:
    """
    Draw ξ at step ``t``: one independent value per requested element.

    All elements of one call share the distribution h(ξ, t); the schedule is
    evaluated once per step, never per agent.

    Raises:
        ScheduleDomainError: If t is outside the ramp domain
    """
    a_t = spec.mean_at(t)
    if spec.family is NoiseFamily.EXPONENTIAL:
        return rng.exponential(scale=a_t, size=size)
    return rng.normal(loc=a_t, scale=spec.std, size=size)


def sample_noise(spec: NoiseSpec, t: int, rng: np.random.Generator) -> float:
    """Single draw from h(ξ, t)."""
    return float(draw_noise(spec, t, rng))
