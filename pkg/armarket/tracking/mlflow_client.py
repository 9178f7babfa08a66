"""
MLflow run tracking for experiment runs.

Optional: runs are tracked only when ``ARMARKET_MLFLOW_URI`` is set or
``--track`` is passed on the command line. The CLI imports this module
lazily, so mlflow is needed only when tracking is on.

One MLflow experiment per armarket experiment kind (``armarket-ar-static``,
``armarket-kinetic-ccm``...). The resolved config is logged as flattened
params, scalar summary statistics as metrics, and the run directory as
artifacts.

Usage:
    tracker = MLflowTracker(tracking_uri="file:./mlruns")

    with tracker.start_run(experiment_name="armarket-ar-static", run_name="seed-1"):
        tracker.log_params(flatten(config_dict))
        tracker.log_metrics(flatten(summary_dict))
        tracker.log_artifacts(run_dir)
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Optional

import mlflow
from mlflow.tracking import MlflowClient

from armarket.settings import MLFLOW_TRACKING_URI

logger = logging.getLogger(__name__)

EXPERIMENT_PREFIX = "armarket-"

# MLflow rejects param values longer than this
MAX_PARAM_LENGTH = 500


def flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Nested dict → dotted keys ({"noise": {"mean": 1}} → {"noise.mean": 1})."""
    out: Dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten(value, prefix=f"{name}."))
        else:
            out[name] = value
    return out


class MLflowTracker:
    """
    Thin wrapper over MLflow for experiment runs.

    Attributes:
        tracking_uri: MLflow tracking URI
        client      : MlflowClient used for experiment lookup
    """

    def __init__(self, tracking_uri: Optional[str] = None):
        self.tracking_uri = tracking_uri or MLFLOW_TRACKING_URI or "file:./mlruns"
        mlflow.set_tracking_uri(self.tracking_uri)
        self.client = MlflowClient()

    def get_or_create_experiment(self, experiment_name: str) -> str:
        """Experiment id, creating the experiment on first use."""
        experiment = self.client.get_experiment_by_name(experiment_name)

        if experiment is not None:
            return experiment.experiment_id

        return self.client.create_experiment(experiment_name)

    @contextmanager
    def start_run(self, experiment_name: str, run_name: Optional[str] = None, **kwargs):
        """Active MLflow run as a context manager."""
        experiment_id = self.get_or_create_experiment(experiment_name)

        with mlflow.start_run(experiment_id=experiment_id, run_name=run_name, **kwargs) as run:
            yield run

    def log_params(self, params: Dict[str, Any]) -> None:
        """Log params, stringified and truncated to MLflow's length limit."""
        cleaned = {k: str(v)[:MAX_PARAM_LENGTH] for k, v in params.items()}
        mlflow.log_params(cleaned)

    def log_metrics(self, metrics: Dict[str, Any]) -> None:
        """Log the numeric entries of ``metrics``; everything else is skipped."""
        numeric = {
            k: float(v)
            for k, v in metrics.items()
            if isinstance(v, (int, float)) and not isinstance(v, bool)
        }
        if numeric:
            mlflow.log_metrics(numeric)

    def log_artifacts(self, run_dir: Path) -> None:
        mlflow.log_artifacts(str(run_dir))


def track_run(
    experiment: str,
    run_name: str,
    config: Dict[str, Any],
    summary: Dict[str, Any],
    run_dir: Path,
    tracking_uri: Optional[str] = None,
) -> None:
    """Log one finished run (config params, summary metrics, output files)."""
    tracker = MLflowTracker(tracking_uri)
    with tracker.start_run(experiment_name=f"{EXPERIMENT_PREFIX}{experiment}", run_name=run_name):
        tracker.log_params(flatten(config))
        tracker.log_metrics(flatten(summary))
        tracker.log_artifacts(run_dir)
    logger.info("tracked run %s in MLflow at %s", run_name, tracker.tracking_uri)
