import json
import os
from datetime import datetime, timezone

import structlog

from .config import get_settings

logger = structlog.get_logger(__name__)

REDIS_RUNS_KEY = "freeprob:runs"


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def record_run(event: dict) -> None:
    """Record a run (suite, resolved options, outcome).

    Pushes to the Redis list `freeprob:runs` when `REDIS_URL` is set and reachable,
    otherwise appends a JSON line to the configured run log. Never raises.
    """
    event_copy = dict(event)
    event_copy.setdefault("timestamp", _now_iso())
    settings = get_settings()

    if settings.redis_url:
        try:
            import redis

            client = redis.from_url(settings.redis_url, decode_responses=True)
            client.rpush(REDIS_RUNS_KEY, json.dumps(event_copy, default=str))
            return
        except Exception:
            logger.exception("run_log_redis_failed", fallback="file")

    try:
        directory = os.path.dirname(settings.run_log)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(settings.run_log, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event_copy, ensure_ascii=False, default=str) + "\n")
    except Exception:
        logger.exception("run_log_write_failed", path=settings.run_log)
