import pytest

from freeprob import weingarten
from freeprob.cache import InMemoryTableCache
from freeprob.config import get_settings


@pytest.fixture(autouse=True)
def isolated_run(tmp_path, monkeypatch):
    # run logs land in tmp_path/logs, tables never leak between tests
    monkeypatch.chdir(tmp_path)
    get_settings.cache_clear()
    weingarten.set_table_cache(InMemoryTableCache())
    yield
    get_settings.cache_clear()
    weingarten.set_table_cache(None)
