"""JSON schemas for the reports printed by the command-line tool."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """Schema for a subcommand report, or ``error`` for the failure envelope."""
    text = resources.files(__name__).joinpath(f"{name}.json").read_text()
    return json.loads(text)


def validate_report(report: dict) -> None:
    """Raise jsonschema.ValidationError if the report does not match its schema."""
    name = "error" if report.get("status") == "error" else report["command"]
    jsonschema.validate(report, load_schema(name))


__all__ = ["load_schema", "validate_report"]
