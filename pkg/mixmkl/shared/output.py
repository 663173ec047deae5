"""Output formatting utilities."""

import dataclasses
import json
import math
from collections.abc import Mapping, Sequence
from typing import Any, Optional

import numpy as np
import pandas as pd
import yaml

from .cli import log_error, log_info
from .errors import ConfigError


def to_plain(data: Any) -> Any:
    """Convert numpy values, dataclasses and tuples into JSON/YAML-safe types."""
    if dataclasses.is_dataclass(data) and not isinstance(data, type):
        return to_plain(dataclasses.asdict(data))
    if isinstance(data, Mapping):
        return {str(key): to_plain(value) for key, value in data.items()}
    if isinstance(data, np.ndarray):
        return to_plain(data.tolist())
    if isinstance(data, (np.bool_, bool)):
        return bool(data)
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, (np.floating, float)):
        value = float(data)
        # JSON has no inf/nan literals
        return value if math.isfinite(value) else str(value)
    if isinstance(data, (str, bytes)):
        return data
    if isinstance(data, Sequence):
        return [to_plain(item) for item in data]
    return data


def render(data: Any, format_type: str = "json") -> str:
    """Render data as json, yaml or table text."""
    plain = to_plain(data)
    if format_type == "json":
        return json.dumps(plain, indent=2, sort_keys=True)
    if format_type == "yaml":
        return str(yaml.safe_dump(plain, default_flow_style=False, sort_keys=True))
    return format_table(plain)


def format_output(
    data: Any, format_type: str = "json", output_file: Optional[str] = None
) -> None:
    """Format and output data in the specified format."""
    output = render(data, format_type)

    if output_file:
        try:
            with open(output_file, "w", encoding="utf-8") as f:
                f.write(output + "\n")
            log_info(f"Output written to {output_file}")
        except OSError as e:
            log_error(f"Failed to write output file: {e}")
            raise ConfigError(f"cannot write {output_file}: {e}") from e
    else:
        print(output)


def format_table(data: Any, prefix: str = "") -> str:
    """Format nested data as aligned key/value lines."""
    if isinstance(data, dict):
        lines = []
        for key, value in data.items():
            label = f"{prefix}{key}"
            if isinstance(value, dict):
                lines.append(format_table(value, prefix=f"{label}."))
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                for index, item in enumerate(value):
                    lines.append(format_table(item, prefix=f"{label}[{index}]."))
            else:
                value_str = str(value)
                if len(value_str) > 60:
                    value_str = value_str[:57] + "..."
                lines.append(f"{label:<40} {value_str}")
        return "\n".join(lines)
    if isinstance(data, list):
        if not data:
            return "No items found"
        return "\n".join(str(item) for item in data)
    return str(data)


def write_csv(rows: Sequence[Mapping[str, Any]], path: str) -> None:
    """Write plot-ready rows to CSV with round-trip float precision."""
    frame = pd.DataFrame([to_plain(row) for row in rows])
    try:
        frame.to_csv(path, index=False, float_format="%.17g")
    except OSError as e:
        raise ConfigError(f"cannot write {path}: {e}") from e
    log_info(f"CSV written to {path}")


def build_report(
    command: str, config: Mapping[str, Any], result: Any
) -> dict[str, Any]:
    """Wrap a result with the tool name, version and the resolved configuration."""
    from .. import __version__

    return {
        "tool": "mixmkl",
        "version": __version__,
        "command": command,
        "config": dict(config),
        "result": result,
    }


def emit_report(
    report: Mapping[str, Any],
    args: Any,
    rows: Optional[Sequence[Mapping[str, Any]]] = None,
) -> None:
    """Write a report in the requested format, plus CSV rows when --csv is set."""
    format_output(report, args.format, args.output)
    csv_path = getattr(args, "csv", None)
    if csv_path:
        if rows:
            write_csv(rows, csv_path)
        else:
            log_info("No grid rows for this report; --csv ignored")
