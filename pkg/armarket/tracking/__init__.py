"""Optional MLflow tracking of experiment runs (imported lazily by the CLI)."""
