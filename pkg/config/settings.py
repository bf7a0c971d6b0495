import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import BaseSettings, validator

APP_NAME = "rac-lab"
APP_VERSION = "0.1.0"


class Settings(BaseSettings):
    """Application settings loaded from RAC_LAB_* environment variables."""

    # Worker bound for parallel restarts and enumeration (RAC_LAB_THREADS)
    threads: Optional[int] = None

    # Reproducibility
    seed: int = 1

    # See-saw defaults
    restarts: int = 20
    restarts_large: int = 50
    max_sweeps: int = 200
    improvement_floor: float = 1e-9

    # Classical enumeration refuses instances above this many inner evaluations
    classical_work_cap: float = 5e9

    # Output
    output_format: str = "json"
    reports_dir: Path = Path("reports")
    log_level: str = "INFO"

    class Config:
        env_prefix = "RAC_LAB_"
        env_file = ".env"
        env_file_encoding = "utf-8"

    @validator("threads")
    def _positive_threads(cls, value):
        if value is not None and value < 1:
            raise ValueError("RAC_LAB_THREADS must be at least 1")
        return value

    @validator("output_format")
    def _known_format(cls, value):
        if value not in ("json", "csv", "pretty"):
            raise ValueError(f"unknown output format {value!r}")
        return value

    @property
    def worker_count(self) -> int:
        if self.threads:
            return self.threads
        return max(1, os.cpu_count() or 1)

    def restarts_for(self, n: int) -> int:
        """Default restart count for an n^(d)->1 scenario."""
        return self.restarts_large if n >= 3 else self.restarts


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
