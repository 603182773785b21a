import os

import pytest

from freeprob.cache import InMemoryTableCache, RedisTableCache, create_default_cache
from freeprob.config import get_settings
from freeprob.weingarten import EasyGroup, WeingartenTable, set_table_cache, weingarten


def test_in_memory_cache_keeps_first_writer():
    cache = InMemoryTableCache()
    cache.put("O:oooo:5", {"N": 5})
    cache.put("O:oooo:5", {"N": 6})
    assert cache.get("O:oooo:5") == {"N": 5}
    assert cache.keys() == ["O:oooo:5"]
    cache.clear()
    assert cache.get("O:oooo:5") is None


def test_default_cache_without_redis_is_in_memory(monkeypatch):
    monkeypatch.delenv("REDIS_URL", raising=False)
    get_settings.cache_clear()
    assert isinstance(create_default_cache(), InMemoryTableCache)


def test_unreachable_redis_falls_back_to_memory(monkeypatch):
    monkeypatch.setenv("REDIS_URL", "redis://127.0.0.1:1/0")
    get_settings.cache_clear()
    assert isinstance(create_default_cache(), InMemoryTableCache)


def test_weingarten_tables_are_served_from_cache():
    cache = InMemoryTableCache()
    set_table_cache(cache)
    first = weingarten(EasyGroup("O"), 4, 5)
    assert cache.keys() == ["O:oooo:5"]

    assert weingarten(EasyGroup("O"), 4, 5) is first


class JsonOnlyCache(InMemoryTableCache):
    shared = True


def test_shared_caches_store_json_and_rebuild_tables():
    cache = JsonOnlyCache()
    set_table_cache(cache)
    first = weingarten(EasyGroup("O"), 4, 5)
    assert isinstance(cache.get("O:oooo:5"), dict)

    second = weingarten(EasyGroup("O"), 4, 5)
    assert second is not first
    assert second.partitions == first.partitions
    assert (second.wg == first.wg).all()


def test_table_json_round_trip_is_exact():
    table = weingarten(EasyGroup("S"), 3, 4)
    restored = WeingartenTable.from_json(table.to_json())
    assert restored.to_json() == table.to_json()


@pytest.mark.skipif(not os.getenv('REDIS_URL'), reason='REDIS_URL not set')
def test_redis_table_cache_basic_lifecycle():
    cache = create_default_cache()
    assert isinstance(cache, RedisTableCache)
    cache.clear()

    cache.put("O:oooo:7", {"N": 7})
    cache.put("O:oooo:7", {"N": 8})
    assert cache.get("O:oooo:7") == {"N": 7}
    assert "O:oooo:7" in cache.keys()

    cache.clear()
    assert cache.get("O:oooo:7") is None
