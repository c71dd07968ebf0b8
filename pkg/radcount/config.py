"""Configuration settings for radcount."""
import logging
import os
from pathlib import Path

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def _available_parallelism() -> int:
    if hasattr(os, "sched_getaffinity"):
        return max(1, len(os.sched_getaffinity(0)))
    return max(1, os.cpu_count() or 1)


# Enumeration indices are int64, so q^D must stay below 2^63.
MAX_BUDGET = 2**62


class Settings(BaseSettings):
    """Engine settings loaded from RADCOUNT_* environment variables."""

    # Service settings
    app_name: str = "radcount"
    app_version: str = "0.1.0"
    log_level: str = "INFO"

    # Result cache (JSON lines); caching is off when unset
    cache: Path | None = None

    # Enumeration settings
    jobs: int = Field(default_factory=_available_parallelism)
    budget: int = 2**34
    path_cap: int = 2**20
    chunk_size: int = 8192
    progress_interval: float = 2.0

    # Share of cache records recomputed by `verify --cache`
    audit_fraction: float = 0.1

    model_config = SettingsConfigDict(
        env_prefix="RADCOUNT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @model_validator(mode="after")
    def validate_config(self):
        """Validate all configuration at once."""
        errors = []

        if self.jobs < 1:
            errors.append("RADCOUNT_JOBS must be at least 1")
        if not 1 <= self.budget <= MAX_BUDGET:
            errors.append("RADCOUNT_BUDGET must lie in [1, 2**62]")
        if self.path_cap < 1:
            errors.append("RADCOUNT_PATH_CAP must be at least 1")
        if self.chunk_size < 1:
            errors.append("RADCOUNT_CHUNK_SIZE must be at least 1")
        if self.progress_interval <= 0:
            errors.append("RADCOUNT_PROGRESS_INTERVAL must be positive")
        if not 0 < self.audit_fraction <= 1:
            errors.append("RADCOUNT_AUDIT_FRACTION must lie in (0, 1]")
        if not isinstance(logging.getLevelName(self.log_level.upper()), int):
            errors.append(f"RADCOUNT_LOG_LEVEL '{self.log_level}' is not a logging level")

        if errors:
            raise ValueError(f"Configuration errors: {', '.join(errors)}")

        return self


settings = Settings()
