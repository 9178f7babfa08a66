"""
Run directory I/O.

Layout of one run directory:

    config.json     resolved configuration (round-trips into ExperimentConfig)
    summary.json    every computed statistic; sorted keys, no timestamps
    histogram.csv   bin_left, bin_right, density (+ reference column when known)
    analytic.csv    x, density columns of the reference curves
    fit.json        tail fit and sensitivity (pareto-sweep)
    profile.csv     savings, mean_wealth (CCM sweep)
    samples.npz     primary samples, optional noise samples, embedded config

summary.json and fit.json carry a ``"run"`` block with the experiment, seed,
config hash and full resolved config.

CSV files start with ``#`` metadata lines:

    # experiment=ar-static
    # seed=1
    # config_sha256=<hex>
    # config={"analysis":...}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from armarket.experiments.schema import ExperimentConfig

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
SUMMARY_FILE = "summary.json"
HISTOGRAM_FILE = "histogram.csv"
ANALYTIC_FILE = "analytic.csv"
FIT_FILE = "fit.json"
PROFILE_FILE = "profile.csv"
SAMPLES_FILE = "samples.npz"

# key of the run header block in summary.json and fit.json
RUN_HEADER_KEY = "run"


def prepare_run_dir(path: Path) -> Path:
    """Create the run directory; OSError propagates when it is not writable."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serialisable: {type(value).__name__}")


def dumps(data: Dict[str, Any]) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, default=_json_default) + "\n"


def write_json(path: Path, data: Dict[str, Any]) -> Path:
    path = Path(path)
    path.write_text(dumps(data), encoding="utf-8")
    return path


def read_json(path: Path) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def run_header(config: ExperimentConfig) -> Dict[str, Any]:
    """Experiment, seed, hash and full resolved config of the generating run."""
    return {
        "experiment": config.experiment,
        "seed": config.seed,
        "config_sha256": config.config_hash(),
        "config": config.resolved(),
    }


def write_run_json(path: Path, data: Dict[str, Any], config: ExperimentConfig) -> Path:
    """JSON artifact carrying the run header under ``RUN_HEADER_KEY``."""
    return write_json(path, {**data, RUN_HEADER_KEY: run_header(config)})


def metadata_lines(config: ExperimentConfig) -> str:
    return (
        f"# experiment={config.experiment}\n"
        f"# seed={config.seed}\n"
        f"# config_sha256={config.config_hash()}\n"
        f"# config={config.canonical_json()}\n"
    )


def write_csv(path: Path, frame: pd.DataFrame, config: ExperimentConfig) -> Path:
    """CSV with ``#`` metadata header lines followed by the column header row."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(metadata_lines(config))
        frame.to_csv(handle, index=False, float_format="%.10g")
    logger.debug("wrote %s (%d rows)", path, len(frame))
    return path


def read_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def read_csv_metadata(path: Path) -> Dict[str, str]:
    """``#`` header lines of a CSV as a dict (``config`` stays a JSON string)."""
    meta: Dict[str, str] = {}
    with Path(path).open(encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
    return meta


def write_samples(
    path: Path,
    samples: np.ndarray,
    config: ExperimentConfig,
    noise: Optional[np.ndarray] = None,
) -> Path:
    arrays = {
        "samples": np.asarray(samples, dtype=float),
        "config": np.array(config.canonical_json()),
    }
    if noise is not None:
        arrays["noise"] = np.asarray(noise, dtype=float)
    path = Path(path)
    np.savez_compressed(path, **arrays)
    return path


def load_samples(run_dir: Path) -> Dict[str, np.ndarray]:
    """Arrays stored in ``samples.npz`` of a run directory."""
    with np.load(Path(run_dir) / SAMPLES_FILE, allow_pickle=False) as data:
        return {key: data[key] for key in data.files}
