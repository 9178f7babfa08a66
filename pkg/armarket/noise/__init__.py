"""Market-return noise specification and sampling."""

from armarket.noise.spec import (
    MeanSchedule,
    NoiseFamily,
    NoiseSpec,
    ScheduleDomainError,
    ScheduleKind,
    draw_noise,
    sample_noise,
)

__all__ = [
    "MeanSchedule",
    "NoiseFamily",
    "NoiseSpec",
    "ScheduleDomainError",
    "ScheduleKind",
    "draw_noise",
    "sample_noise",
]
