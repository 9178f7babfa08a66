"""
Root conftest.py: shared fixtures available across all test modules.
"""
from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import pytest

from armarket.experiments import artifacts
from armarket.experiments.schema import ExperimentConfig, load_config

CONFIGS_DIR = Path(__file__).parent / "configs"


# ── CONFIG FIXTURES ───────────────────────────────────────────────────────────

@pytest.fixture
def configs_dir() -> Path:
    """Directory of the shipped example experiment configs."""
    return CONFIGS_DIR


@pytest.fixture
def ar_static_raw() -> Dict[str, Any]:
    """Small single-agent exponential-noise run at λ = 0.4."""
    return {
        "experiment": "ar-static",
        "seed": 1,
        "noise": {"family": "exponential", "mean": 1.0},
        "population": {"count": 1, "capacity": {"law": "constant", "savings": 0.4}},
        "simulation": {"steps": 20000, "burn_in": 100},
    }


@pytest.fixture
def make_config() -> Callable[..., ExperimentConfig]:
    """Factory: validated ExperimentConfig from keyword sections."""
    def _make(experiment: str, **sections: Any) -> ExperimentConfig:
        return load_config({"experiment": experiment, **sections})
    return _make


# ── SAMPLE FIXTURES ───────────────────────────────────────────────────────────

@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def exp_samples(rng) -> np.ndarray:
    """20 000 i.i.d. exponential(1) draws."""
    return rng.exponential(1.0, size=20000)


@pytest.fixture
def fake_run(tmp_path, make_config) -> Callable[..., Path]:
    """
    Factory: run directory holding only samples.npz, for comparison tests
    that do not need a simulation.
    """
    def _fake(name: str, samples: np.ndarray, noise: np.ndarray = None) -> Path:
        run_dir = artifacts.prepare_run_dir(tmp_path / name)
        config = make_config("ar-static")
        artifacts.write_samples(run_dir / artifacts.SAMPLES_FILE, samples, config, noise)
        return run_dir
    return _fake
