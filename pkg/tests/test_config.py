"""Tests for settings and command logging."""
import argparse
import logging

import pytest
from pydantic import ValidationError

from radcount.config import Settings
from radcount.middleware.logging import CommandLoggingMiddleware
from radcount.schemas.errors import InvalidRequestError


def test_defaults():
    settings = Settings(_env_file=None)
    assert settings.app_name == "radcount"
    assert settings.cache is None
    assert settings.jobs >= 1
    assert settings.budget == 2**34


def test_environment_override(monkeypatch, tmp_path):
    monkeypatch.setenv("RADCOUNT_JOBS", "3")
    monkeypatch.setenv("RADCOUNT_CACHE", str(tmp_path / "c.jsonl"))
    settings = Settings(_env_file=None)
    assert settings.jobs == 3
    assert settings.cache == tmp_path / "c.jsonl"


def test_validator_collects_errors(monkeypatch):
    """Every bad value is reported at once."""
    monkeypatch.setenv("RADCOUNT_JOBS", "0")
    monkeypatch.setenv("RADCOUNT_AUDIT_FRACTION", "2")
    monkeypatch.setenv("RADCOUNT_LOG_LEVEL", "chatty")
    with pytest.raises(ValidationError) as exc_info:
        Settings(_env_file=None)
    message = str(exc_info.value)
    assert "RADCOUNT_JOBS" in message
    assert "RADCOUNT_AUDIT_FRACTION" in message
    assert "RADCOUNT_LOG_LEVEL" in message


def test_middleware_logs_completion(caplog):
    args = argparse.Namespace(command="count")
    with caplog.at_level(logging.INFO, logger="radcount.middleware.logging"):
        assert CommandLoggingMiddleware().dispatch(args, lambda a: 0) == 0
    started, completed = caplog.records
    assert started.message == "Command started"
    assert completed.message == "Command completed"
    assert completed.exit_code == 0
    assert completed.run_id == args.run_id


def test_middleware_logs_and_reraises(caplog):
    def fail(args):
        raise InvalidRequestError("bad")

    with caplog.at_level(logging.INFO, logger="radcount.middleware.logging"):
        with pytest.raises(InvalidRequestError):
            CommandLoggingMiddleware().dispatch(argparse.Namespace(command="poly"), fail)
    failed = caplog.records[-1]
    assert failed.message == "Command failed"
    assert failed.levelno == logging.ERROR
    assert failed.error == "bad"
    assert failed.exc_info is None


def test_budget_above_int64_range_is_rejected(monkeypatch):
    """Enumeration indices must fit in int64."""
    monkeypatch.setenv("RADCOUNT_BUDGET", str(2**63))
    with pytest.raises(ValidationError, match="RADCOUNT_BUDGET"):
        Settings(_env_file=None)
    monkeypatch.setenv("RADCOUNT_BUDGET", str(2**62))
    assert Settings(_env_file=None).budget == 2**62
