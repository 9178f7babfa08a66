"""
Process-level settings for armarket.

Values are read from the environment (or a ``.env`` file) through
python-decouple. Experiment parameters do NOT live here; they come from the
JSON experiment configuration validated in ``armarket.experiments.schema``.
"""

from pathlib import Path

from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

# Default root directory for run outputs (one sub-directory per run)
OUTPUT_DIR = Path(config("ARMARKET_OUTPUT_DIR", default="runs"))

# Replica execution
RUNTIME_CONFIG = {
    "workers": config("ARMARKET_WORKERS", default=1, cast=int),
    # upper bound on agents × steps held in one noise block
    "chunk_elements": config("ARMARKET_CHUNK_ELEMENTS", default=4_000_000, cast=int),
}

LOG_LEVEL = config("ARMARKET_LOG_LEVEL", default="INFO")

# Empty → MLflow tracking disabled
MLFLOW_TRACKING_URI = config("ARMARKET_MLFLOW_URI", default="")
