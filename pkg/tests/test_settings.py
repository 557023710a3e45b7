"""
Unit tests for settings, logging setup and the error hierarchy.
"""

import json
import logging
import os
import sys

import pytest
from pydantic import ValidationError

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from exceptions import (
    ConfigError,
    DegenerateContinuationError,
    InvalidQuenchError,
    NumericError,
    QuenchDynamicsError,
    ValidationFailedError
)
from logging_config import configure_logging
from settings import Settings, reload_settings


class TestSettings:
    """Tests for the settings layer."""

    def test_defaults(self):
        s = Settings()
        assert s.rk4_step == 1e-3
        assert s.divergence_cap == 1e12
        assert s.n_samples == 3001
        assert s.float_format == ".10g"
        assert s.oracle_points >= 64

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("QUENCH_DYNAMICS_MAX_WORKERS", "7")
        monkeypatch.setenv("QUENCH_DYNAMICS_LOG_FORMAT", "json")
        s = Settings()
        assert s.max_workers == 7
        assert s.log_format == "json"

    def test_bounds(self):
        with pytest.raises(ValidationError):
            Settings(rk4_step=0.0)
        with pytest.raises(ValidationError):
            Settings(log_format="xml")
        with pytest.raises(ValidationError):
            Settings(port=0)

    def test_yaml_round_trip(self, tmp_path):
        path = tmp_path / "settings.yaml"
        original = Settings(max_workers=3, emit_svg=True)
        original.to_yaml(str(path))
        loaded = Settings.from_yaml(str(path))
        assert loaded.max_workers == 3
        assert loaded.emit_svg is True

    def test_reload(self, monkeypatch):
        monkeypatch.setenv("QUENCH_DYNAMICS_ORACLE_TIMES", "4")
        assert reload_settings().oracle_times == 4
        monkeypatch.delenv("QUENCH_DYNAMICS_ORACLE_TIMES")
        reload_settings()


class TestLogging:
    """Tests for logging setup."""

    @pytest.fixture(autouse=True)
    def restore_root(self):
        root = logging.getLogger()
        handlers, level = list(root.handlers), root.level
        yield
        root.handlers[:] = handlers
        root.setLevel(level)

    def test_console(self):
        root = configure_logging("DEBUG", "console")
        assert root.level == logging.DEBUG
        assert len(root.handlers) == 1

    def test_json_file(self, tmp_path):
        root = configure_logging("INFO", "json", str(tmp_path))
        assert len(root.handlers) == 2
        logging.getLogger("quench.test").info("evolved", extra={"n_samples": 11})
        for handler in root.handlers:
            handler.flush()
        files = list(tmp_path.glob("quench_*.log"))
        assert len(files) == 1
        entry = json.loads(files[0].read_text().strip().splitlines()[-1])
        assert entry["message"] == "evolved"
        assert entry["level"] == "INFO"
        assert entry["n_samples"] == 11
        assert "timestamp" in entry


class TestErrors:
    """Tests for the error hierarchy."""

    def test_exit_codes(self):
        assert ConfigError("x").exit_code == 1
        assert InvalidQuenchError("x").exit_code == 1
        assert DegenerateContinuationError("x").exit_code == 2
        assert ValidationFailedError("x").exit_code == 3

    def test_builtin_bases(self):
        assert isinstance(InvalidQuenchError("x"), ValueError)
        assert isinstance(DegenerateContinuationError("x"), ArithmeticError)
        assert isinstance(DegenerateContinuationError("x"), NumericError)

    def test_to_dict(self):
        payload = InvalidQuenchError("no ground state", details={"mode": 1}).to_dict()
        assert payload == {"error": "INVALID_QUENCH", "message": "no ground state", "details": {"mode": 1}}
        assert QuenchDynamicsError("plain").to_dict() == {"error": "QUENCH_ERROR", "message": "plain"}


class TestShippedSettings:
    """config/settings.yaml matches the built-in defaults."""

    def test_matches_defaults(self):
        path = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config", "settings.yaml")
        assert Settings.from_yaml(path).model_dump() == Settings().model_dump()
