import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Process-wide settings, resolved from the environment (and `.env` when present)."""

    max_k: int = Field(10, ge=1)
    max_matrix: int = Field(1000, ge=1)
    series_order: int = Field(8, ge=1)
    log_level: str = "WARNING"
    log_json: bool = False
    redis_url: Optional[str] = None
    run_log: str = os.path.join("logs", "runs.log")


def _env_bool(value: Optional[str]) -> bool:
    return (value or "").strip().lower() in ("1", "true", "yes", "on")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    load_dotenv(override=False)
    raw = {
        "max_k": os.getenv("FREEPROB_MAX_K"),
        "max_matrix": os.getenv("FREEPROB_MAX_MATRIX"),
        "series_order": os.getenv("FREEPROB_SERIES_ORDER"),
        "log_level": os.getenv("FREEPROB_LOG_LEVEL"),
        "redis_url": os.getenv("REDIS_URL"),
        "run_log": os.getenv("FREEPROB_RUN_LOG"),
    }
    values = {k: v for k, v in raw.items() if v not in (None, "")}
    values["log_json"] = _env_bool(os.getenv("FREEPROB_LOG_JSON"))
    return Settings(**values)
