"""
Run-vs-run and run-vs-reference comparisons.

``compare`` loads the primary samples of run A (``samples.npz``) and
checks them against either another run's samples (two-sample KS, relative
mean delta) or an analytic reference (one-sample KS, relative mean delta
when the reference mean is finite). Each metric passes when it is at or
below its tolerance; metrics without a tolerance are reported only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Optional

import numpy as np

from armarket.estimation.empirical import EmpiricalDistribution, ks_distance, ks_two_sample
from armarket.experiments import artifacts
from armarket.experiments.references import is_reference, parse_reference
from armarket.experiments.schema import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES: Dict[str, float] = {"ks": 0.02}
QUANTITIES = ("wealth", "noise")

_ARRAY_KEYS = {"wealth": "samples", "noise": "noise"}


class ComparisonError(ValueError):
    """Raised when two artifacts do not share a comparable domain."""
    pass


@dataclass
class ComparisonReport:
    """
    Attributes:
        run_a     : Path of the first run
        target    : Second run path or reference label
        quantity  : ``wealth`` or ``noise``
        metrics   : Metric name → value
        tolerances: Metric name → tolerance
        passed    : Metric name → pass flag (only metrics with a tolerance)
    """

    run_a: str
    target: str
    quantity: str
    metrics: Dict[str, float] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    passed: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> Dict[str, object]:
        return {
            "run_a": self.run_a,
            "target": self.target,
            "quantity": self.quantity,
            "metrics": self.metrics,
            "tolerances": self.tolerances,
            "passed": self.passed,
            "ok": self.ok,
        }


def parse_tolerances(items: Optional[Iterable[str]]) -> Dict[str, float]:
    """``["ks=0.01", "mean=0.05"]`` → dict; defaults to ks=0.02."""
    if not items:
        return dict(DEFAULT_TOLERANCES)
    tolerances: Dict[str, float] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"tolerance must be metric=value, got {item!r}")
        try:
            tolerances[key.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"tolerance {key!r} is not a number: {value!r}") from exc
    return tolerances


def load_run_samples(run_dir: Path, quantity: str) -> EmpiricalDistribution:
    """
    Samples of ``quantity`` stored in a run directory.

    Raises:
        ComparisonError: Missing run, missing samples or missing quantity
    """
    if quantity not in QUANTITIES:
        raise ComparisonError(f"quantity must be one of {QUANTITIES}, got {quantity!r}")
    path = Path(run_dir)
    if not (path / artifacts.SAMPLES_FILE).is_file():
        raise ComparisonError(f"{path} has no {artifacts.SAMPLES_FILE}; not a run directory with samples")
    arrays = artifacts.load_samples(path)
    key = _ARRAY_KEYS[quantity]
    if key not in arrays:
        raise ComparisonError(f"run {path} recorded no {quantity} samples")
    return EmpiricalDistribution(arrays[key])


def _relative_delta(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0.0 else abs(a - b)


def compare(
    run_a: Path,
    target: str,
    quantity: str = "wealth",
    tolerances: Optional[Dict[str, float]] = None,
) -> ComparisonReport:
    """
    Compare run A with a second run directory or an analytic reference.

    Args:
        run_a     : Run directory holding samples.npz
        target    : Run directory or reference string (``series:lam=0.4,...``)
        quantity  : ``wealth`` (primary samples) or ``noise``
        tolerances: Metric → tolerance (default ks=0.02)

    Raises:
        ComparisonError: Mismatched domains (missing samples/quantity, or
                         samples outside the reference's support)
        ConfigError    : Malformed reference string
    """
    tolerances = dict(DEFAULT_TOLERANCES) if tolerances is None else dict(tolerances)
    a = load_run_samples(run_a, quantity)
    report = ComparisonReport(run_a=str(run_a), target=target, quantity=quantity, tolerances=tolerances)
    mean_a = float(np.mean(a.samples))

    if is_reference(target):
        ref = parse_reference(target)
        report.target = ref.label
        if ref.lower is not None and a.sorted[0] < ref.lower - 1e-12:
            raise ComparisonError(
                f"samples reach {a.sorted[0]:.4g}, below the support of {ref.label} (>= {ref.lower})"
            )
        report.metrics["ks"] = ks_distance(a, ref.cdf)
        if ref.mean is not None:
            report.metrics["mean"] = _relative_delta(mean_a, ref.mean)
    else:
        b = load_run_samples(Path(target), quantity)
        report.metrics["ks"] = ks_two_sample(a, b)
        report.metrics["mean"] = _relative_delta(mean_a, float(np.mean(b.samples)))

    for name, tol in tolerances.items():
        if name not in report.metrics:
            raise ComparisonError(f"no metric {name!r} for this comparison; available: {sorted(report.metrics)}")
        report.passed[name] = report.metrics[name] <= tol

    logger.info(
        "compare %s vs %s (%s): %s -> %s",
        run_a, report.target, quantity,
        ", ".join(f"{k}={v:.4g}" for k, v in sorted(report.metrics.items())),
        "pass" if report.ok else "FAIL",
    )
    return report
