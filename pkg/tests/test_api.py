"""
Unit tests for the FastAPI application endpoints.
Tests API endpoints, request validation, and responses.
"""

import os
import sys
from unittest.mock import MagicMock, patch

import pytest
from fastapi.testclient import TestClient

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from exceptions import DegenerateContinuationError
from models import CheckStatus, ValidationCheck, ValidationReport


def scenario_body(omega_c: float = 0.3, initial_J: float = 1.1, n_samples: int = 11) -> dict:
    return {
        "quench": {
            "initial": {"omega1": 1.0, "omega2": 1.5, "J": initial_J, "omega_c": omega_c},
            "final": {"omega1": 1.3, "omega2": 1.8, "J": 0.9, "omega_c": omega_c},
        },
        "t_max": 2.0,
        "n_samples": n_samples,
    }


@pytest.fixture(autouse=True)
def reset_sse_state():
    """sse-starlette keeps a process-wide exit event bound to the first event loop."""
    from sse_starlette import sse
    if hasattr(sse, "AppStatus"):
        sse.AppStatus.should_exit_event = None
    yield


@pytest.fixture
def client():
    from app import app
    with TestClient(app) as c:
        yield c


class TestSystemEndpoints:
    """Tests for system endpoints."""

    def test_root_endpoint(self, client):
        response = client.get("/")
        assert response.status_code == 200
        data = response.json()
        assert data["name"] == "Quench Dynamics Service"
        assert data["version"] == "1.0.0"
        assert data["status"] == "running"
        assert "evolve" in data["endpoints"]

    def test_health_endpoint(self, client):
        with patch("psutil.Process") as mock_psutil:
            mock_process = MagicMock()
            mock_process.memory_info.return_value.rss = 1024 * 1024 * 100  # 100MB
            mock_psutil.return_value = mock_process

            response = client.get("/health")

        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "healthy"
        assert data["memory_usage_mb"] == 100.0
        assert data["max_workers"] >= 1
        assert data["uptime_seconds"] >= 0.0

    def test_settings_endpoint(self, client):
        response = client.get("/settings")
        assert response.status_code == 200
        data = response.json()
        assert data["rk4_step"] == 1e-3
        assert data["float_format"] == ".10g"


class TestEvolveEndpoints:
    """Tests for evolution endpoints."""

    def test_evolve(self, client):
        response = client.post("/evolve", json=scenario_body())
        assert response.status_code == 200
        data = response.json()
        assert data["n_records"] == 11
        assert len(data["records"]) == 11
        assert data["records"][0]["t"] == 0.0
        assert data["diverged"] is False

    def test_invalid_body(self, client):
        body = scenario_body()
        body["quench"]["final"]["omega_c"] = 0.5
        response = client.post("/evolve", json=body)
        assert response.status_code == 422
        assert response.json()["error"] == "VALIDATION_ERROR"

    def test_invalid_quench(self, client):
        response = client.post("/evolve", json=scenario_body(omega_c=0.0, initial_J=2.0))
        assert response.status_code == 422
        assert response.json()["error"] == "INVALID_QUENCH"

    def test_numeric_failure(self, client):
        failing = MagicMock()
        failing.run_evolve.side_effect = DegenerateContinuationError("threshold")
        with patch("app.get_evolver_instance", return_value=failing):
            response = client.post("/evolve", json=scenario_body())
        assert response.status_code == 500
        assert response.json()["error"] == "DEGENERATE_CONTINUATION"

    def test_stream(self, client):
        response = client.post("/evolve/stream", json=scenario_body(n_samples=5))
        assert response.status_code == 200
        assert response.text.count("event: record") == 5
        assert "event: done" in response.text

    def test_stream_evaluates_off_the_event_loop(self, client):
        import asyncio
        with patch("app.asyncio.to_thread", wraps=asyncio.to_thread) as spy:
            response = client.post("/evolve/stream", json=scenario_body(n_samples=5))
        assert response.text.count("event: record") == 5
        assert spy.call_count >= 5

    def test_stream_reports_numeric_failure(self, client):
        with patch("evolver.QuenchEvolver.evaluate", side_effect=DegenerateContinuationError("threshold")):
            response = client.post("/evolve/stream", json=scenario_body(n_samples=5))
        assert response.status_code == 200
        assert "event: error" in response.text
        assert "DEGENERATE_CONTINUATION" in response.text
        assert "event: record" not in response.text
        assert "event: done" not in response.text

    def test_stream_rejects_invalid_quench(self, client):
        response = client.post("/evolve/stream", json=scenario_body(omega_c=0.0, initial_J=2.0))
        assert response.status_code == 422

    def test_sweep(self, client):
        response = client.post("/sweep", json={
            "config": scenario_body(),
            "axis": "omega_c",
            "values": [0.3, -1.0, 0.8],
        })
        assert response.status_code == 200
        entries = response.json()["entries"]
        assert [e["value"] for e in entries] == [0.3, -1.0, 0.8]
        assert entries[1]["error"] == "CONFIG_ERROR"
        assert len(entries[2]["records"]) == 11

    def test_sweep_requires_values(self, client):
        response = client.post("/sweep", json={"config": scenario_body(), "axis": "J_f", "values": []})
        assert response.status_code == 422


class TestFigureAndValidation:
    """Tests for figure presets and validation."""

    def test_figure_preset(self, client):
        response = client.get("/figures/2")
        assert response.status_code == 200
        data = response.json()
        assert data["axis"] == "J_f"
        assert 2.4 in data["values"]
        assert data["config"]["omega_c"] == 0.2

    def test_unknown_figure(self, client):
        assert client.get("/figures/42").status_code == 404

    def test_validate(self, client):
        report = ValidationReport(checks=[ValidationCheck(name="anchor_values", status=CheckStatus.PASS)])
        with patch("app.run_validate", return_value=report):
            response = client.get("/validate")
        assert response.status_code == 200
        assert response.json()["checks"][0]["name"] == "anchor_values"
