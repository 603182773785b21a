import json
import threading
from typing import Any, Dict, List, Optional, Protocol

import structlog

from .config import get_settings

logger = structlog.get_logger(__name__)


class TableCache(Protocol):
    # shared caches hold JSON; process-local ones hold the table objects themselves
    shared: bool

    def get(self, key: str) -> Optional[Any]: ...

    def put(self, key: str, table: Any) -> None: ...

    def keys(self) -> List[str]: ...

    def clear(self) -> None: ...


class InMemoryTableCache:
    """Process-local cache of built Weingarten tables. Insertion is idempotent."""

    shared = False

    def __init__(self):
        self.tables: Dict[str, Any] = {}
        self._lock = threading.Lock()

    def get(self, key: str) -> Optional[Any]:
        with self._lock:
            return self.tables.get(key)

    def put(self, key: str, table: Any) -> None:
        with self._lock:
            self.tables.setdefault(key, table)

    def keys(self) -> List[str]:
        with self._lock:
            return list(self.tables)

    def clear(self) -> None:
        with self._lock:
            self.tables.clear()


class RedisTableCache:
    """Tables shared across processes as JSON blobs of exact fractions."""

    shared = True

    def __init__(self, redis_url: str):
        try:
            import redis

            self.client = redis.from_url(redis_url, decode_responses=True)
            # test connection
            self.client.ping()
        except Exception as e:
            logger.exception("redis_connect_failed", redis_url=redis_url, error=str(e))
            raise

        self.prefix = "freeprob:wg:"
        self.set_key = "freeprob:wg:index"

    def _key(self, key: str) -> str:
        return f"{self.prefix}{key}"

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        raw = self.client.get(self._key(key))
        if not raw:
            return None
        return json.loads(raw)

    def put(self, key: str, table: Dict[str, Any]) -> None:
        # NX keeps the first writer's table
        self.client.set(self._key(key), json.dumps(table), nx=True)
        self.client.sadd(self.set_key, key)

    def keys(self) -> List[str]:
        out = []
        for key in self.client.smembers(self.set_key) or []:
            try:
                if self.client.exists(self._key(key)):
                    out.append(key)
                else:
                    # cleanup
                    self.client.srem(self.set_key, key)
            except Exception:
                logger.exception("redis_key_check_failed", key=key)
        return sorted(out)

    def clear(self) -> None:
        for key in self.client.smembers(self.set_key) or []:
            self.client.delete(self._key(key))
        self.client.delete(self.set_key)


def create_default_cache() -> TableCache:
    """Redis when REDIS_URL is set and reachable, otherwise in-memory."""
    redis_url = get_settings().redis_url
    if redis_url:
        try:
            return RedisTableCache(redis_url)
        except Exception:
            logger.warning("cache_fallback", backend="memory")
    return InMemoryTableCache()
