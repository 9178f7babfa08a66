"""
Tests for MLflow run tracking. MLflow itself is mocked; no tracking server
or mlruns directory is touched.
"""

from unittest.mock import MagicMock

import pytest

pytest.importorskip("mlflow")

from armarket.tracking import mlflow_client  # noqa: E402
from armarket.tracking.mlflow_client import MLflowTracker, flatten, track_run  # noqa: E402


@pytest.fixture
def mock_mlflow(mocker):
    mocked = mocker.patch.object(mlflow_client, "mlflow")
    client_cls = mocker.patch.object(mlflow_client, "MlflowClient")
    return mocked, client_cls.return_value


@pytest.mark.unit
class TestFlatten:

    def test_nested(self):
        data = {"noise": {"mean": 1.0, "schedule": {"kind": "constant"}}, "seed": 1}
        assert flatten(data) == {"noise.mean": 1.0, "noise.schedule.kind": "constant", "seed": 1}

    def test_empty(self):
        assert flatten({}) == {}


@pytest.mark.unit
class TestMLflowTracker:

    def test_explicit_uri(self, mock_mlflow):
        mocked, _ = mock_mlflow
        tracker = MLflowTracker(tracking_uri="file:/tmp/mlruns")
        assert tracker.tracking_uri == "file:/tmp/mlruns"
        mocked.set_tracking_uri.assert_called_once_with("file:/tmp/mlruns")

    def test_default_uri(self, mock_mlflow, monkeypatch):
        monkeypatch.setattr(mlflow_client, "MLFLOW_TRACKING_URI", "")
        assert MLflowTracker().tracking_uri == "file:./mlruns"

    def test_existing_experiment(self, mock_mlflow):
        _, client = mock_mlflow
        client.get_experiment_by_name.return_value = MagicMock(experiment_id="7")
        assert MLflowTracker("file:x").get_or_create_experiment("armarket-ar-static") == "7"
        client.create_experiment.assert_not_called()

    def test_new_experiment(self, mock_mlflow):
        _, client = mock_mlflow
        client.get_experiment_by_name.return_value = None
        client.create_experiment.return_value = "8"
        assert MLflowTracker("file:x").get_or_create_experiment("armarket-kinetic-ccm") == "8"

    def test_params_are_truncated_strings(self, mock_mlflow):
        mocked, _ = mock_mlflow
        MLflowTracker("file:x").log_params({"a": 1, "b": "x" * 600})
        logged = mocked.log_params.call_args.args[0]
        assert logged["a"] == "1"
        assert len(logged["b"]) == 500

    def test_only_numeric_metrics(self, mock_mlflow):
        mocked, _ = mock_mlflow
        MLflowTracker("file:x").log_metrics({"ks": 0.01, "n": 3, "ok": True, "reference": "exp:mean=1.0"})
        mocked.log_metrics.assert_called_once_with({"ks": 0.01, "n": 3.0})

    def test_no_numeric_metrics(self, mock_mlflow):
        mocked, _ = mock_mlflow
        MLflowTracker("file:x").log_metrics({"reference": "exp"})
        mocked.log_metrics.assert_not_called()


@pytest.mark.unit
class TestTrackRun:

    def test_logs_everything(self, mock_mlflow, tmp_path):
        mocked, client = mock_mlflow
        client.get_experiment_by_name.return_value = MagicMock(experiment_id="3")
        track_run(
            experiment="ar-static",
            run_name="seed-1",
            config={"seed": 1, "noise": {"mean": 1.0}},
            summary={"wealth": {"mean": 1.66}, "experiment": "ar-static"},
            run_dir=tmp_path,
            tracking_uri="file:x",
        )
        client.get_experiment_by_name.assert_called_once_with("armarket-ar-static")
        mocked.start_run.assert_called_once_with(experiment_id="3", run_name="seed-1")
        mocked.log_params.assert_called_once_with({"seed": "1", "noise.mean": "1.0"})
        mocked.log_metrics.assert_called_once_with({"wealth.mean": 1.66})
        mocked.log_artifacts.assert_called_once_with(str(tmp_path))
