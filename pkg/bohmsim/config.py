"""
bohmsim/config.py
"""
from __future__ import annotations

import os
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Parallelism (BOHM_SIM_THREADS caps every parallel map)
    THREADS: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    # Logging
    LOG_LEVEL: str = "INFO"

    # Output
    OUTPUT_DIR: str = "./out"
    CSV_FLOAT_FORMAT: str = "%.12e"

    # Numerics
    NODE_EPS: float = Field(1e-12, gt=0)        # relative to the peak density on the slice
    QUAD_HALF_WIDTH: float = Field(12.0, gt=0)  # oracle interval k0 ± QUAD_HALF_WIDTH·σ
    QUAD_LIMIT: int = Field(400, ge=50)          # QUADPACK subdivision limit

    model_config = SettingsConfigDict(
        env_prefix="BOHM_SIM_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
