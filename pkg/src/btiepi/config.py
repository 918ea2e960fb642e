"""
Runtime configuration.

Values come from the environment (optionally a ``.env`` file) and can always be
overridden by explicit function arguments.
"""

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator


class Settings(BaseModel):
    """Environment-backed settings."""

    log_level: str = "WARNING"
    jobs: int = Field(default=1, ge=1)
    separation_tolerance: float = Field(default=1e-9, gt=0)
    enumeration_cap: int = Field(default=12, ge=1)
    vertex_cap: int = Field(default=20, ge=1)
    node_limit: int = Field(default=100_000, ge=1)
    cut_rounds: int = Field(default=200, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return value


_ENVIRONMENT = {
    "log_level": "BTIEPI_LOG",
    "jobs": "BTIEPI_JOBS",
    "separation_tolerance": "BTIEPI_SEP_TOL",
    "enumeration_cap": "BTIEPI_TREE_CAP",
    "vertex_cap": "BTIEPI_VERTEX_CAP",
    "node_limit": "BTIEPI_NODE_LIMIT",
    "cut_rounds": "BTIEPI_CUT_ROUNDS",
}


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process."""
    load_dotenv()
    values = {
        field: os.environ[variable]
        for field, variable in _ENVIRONMENT.items()
        if os.getenv(variable) not in (None, "")
    }
    return Settings.model_validate(values)
