import json
from functools import lru_cache
from pathlib import Path

from jsonschema import ValidationError, validate

from .errors import UsageError

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "docs" / "schemas"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    path = SCHEMA_DIR / f"{name}.json"
    if not path.exists():
        raise UsageError(f"no output schema named {name!r}")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def validate_payload(payload: dict, name: str) -> dict:
    """Check a command payload against docs/schemas/<name>.json; returns the payload unchanged."""
    try:
        validate(instance=payload, schema=load_schema(name))
    except ValidationError as e:
        raise UsageError(f"payload does not match schema {name!r}: {e.message}")
    return payload
