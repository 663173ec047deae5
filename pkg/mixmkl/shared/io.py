"""Reading structured input files."""

from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError


def read_structured(path: str | Path) -> Any:
    """Load a JSON or YAML document (YAML is a superset of JSON)."""
    source = Path(path)
    if not source.is_file():
        raise ConfigError(f"input file not found: {source}")
    try:
        with open(source, encoding="utf-8") as f:
            return yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {source}: {e}") from e


def require_mapping(data: Any, what: str) -> dict[str, Any]:
    """Return ``data`` if it is a mapping, else raise ConfigError."""
    if not isinstance(data, dict):
        raise ConfigError(f"{what} must be a JSON object")
    return data
