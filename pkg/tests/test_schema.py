import pytest

from freeprob.errors import UsageError
from freeprob.schema import load_schema, validate_payload

HEADER = {"command": "numbers", "version": "0.1.0", "format": "json", "options": {}}


def test_every_command_has_a_schema():
    from freeprob.cli import COMMANDS

    for name in COMMANDS:
        assert load_schema(name)["type"] == "object"


def test_unknown_schema():
    with pytest.raises(UsageError):
        load_schema("nope")


def test_valid_payload_is_returned():
    payload = {"header": HEADER, "name": "catalan", "values": ["1", "1", "2", "5"]}
    assert validate_payload(payload, "numbers") is payload


def test_invalid_payloads():
    with pytest.raises(UsageError):
        validate_payload({"name": "catalan"}, "numbers")
    with pytest.raises(UsageError):
        validate_payload({"header": HEADER, "name": "catalan", "values": ["0.5"]}, "numbers")
