"""CLI utilities for mixmkl."""

import argparse
import importlib.util
import os
import sys
from typing import Optional

from rich.console import Console

_TRUTHY = ("1", "true", "True", "TRUE")


class Colors:
    """Terminal colour handling with automatic capability detection."""

    def __init__(self) -> None:
        """Initialize Colors with Rich-based terminal detection."""
        self._console_stderr = Console(
            file=sys.stderr,
            force_terminal=self._should_force_color(),
            no_color=self._should_disable_color(),
            color_system="auto",
        )
        self.verbose = False

    def _should_force_color(self) -> bool:
        """Check if color output should be forced."""
        return os.environ.get("FORCE_COLOR", "") in _TRUTHY

    def _should_disable_color(self) -> bool:
        """Check if color output should be disabled."""
        no_color = os.environ.get("NO_COLOR", "")
        force_color = os.environ.get("FORCE_COLOR", "")

        # FORCE_COLOR=0 explicitly disables color
        if force_color == "0":
            return True
        if no_color and force_color != "1":
            return True
        if not sys.stderr.isatty() and force_color not in _TRUTHY:
            return True
        return False

    def get_console(self) -> Console:
        """Get the stderr Console used for every log line."""
        return self._console_stderr


colors = Colors()


def set_verbose(enabled: bool) -> None:
    """Switch debug logging on or off for the rest of the process."""
    colors.verbose = enabled


def log_info(message: str) -> None:
    """Log info message to stderr using Rich console."""
    console = colors.get_console()
    console.print(f"[blue][INFO][/blue] {message}", highlight=False)


def log_warn(message: str) -> None:
    """Log warning message to stderr using Rich console."""
    console = colors.get_console()
    console.print(f"[yellow][WARN][/yellow] {message}", highlight=False)


def log_error(message: str) -> None:
    """Log error message to stderr using Rich console."""
    console = colors.get_console()
    console.print(f"[red][ERROR][/red] {message}", highlight=False)


def log_success(message: str) -> None:
    """Log success message to stderr using Rich console."""
    console = colors.get_console()
    console.print(f"[green][SUCCESS][/green] {message}", highlight=False)


def log_debug(message: str) -> None:
    """Log debug message to stderr, only in verbose mode."""
    if not colors.verbose:
        return
    console = colors.get_console()
    console.print(f"[dim][DEBUG][/dim] {message}", highlight=False)


def add_common_args(
    parser_obj: argparse.ArgumentParser, seed_default: Optional[int] = 0
) -> None:
    """Add input, seed and output arguments shared by the analysis commands."""
    source = parser_obj.add_mutually_exclusive_group()
    source.add_argument("--spec", help="Chain or pool JSON file")
    source.add_argument(
        "--sample",
        help="Use a built-in desk-scale pool (two-state, desk, six-state, iid)",
    )
    parser_obj.add_argument(
        "--seed",
        type=_seed,
        default=seed_default,
        help=f"Random seed, a 64-bit unsigned integer (default: {seed_default or 0})",
    )
    add_output_args(parser_obj)


def add_output_args(parser_obj: argparse.ArgumentParser) -> None:
    """Add output-only arguments."""
    parser_obj.add_argument(
        "-f",
        "--format",
        choices=["table", "json", "yaml"],
        default="json",
        help="Output format (default: json)",
    )
    parser_obj.add_argument("-o", "--output", help="Output file (default: stdout)")
    parser_obj.add_argument("--csv", help="Also write grid/sweep rows to this CSV")
    parser_obj.add_argument(
        "-v", "--verbose", action="store_true", help="Verbose output"
    )
    parser_obj.add_argument("-q", "--quiet", action="store_true", help="Minimal output")


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return seed


def check_dependencies() -> None:
    """Check if the numerical stack is importable."""
    deps = ["numpy", "scipy", "pandas", "yaml"]
    missing = [dep for dep in deps if importlib.util.find_spec(dep) is None]

    if missing:
        log_error(f"Missing required dependencies: {', '.join(missing)}")
        log_info("Please install the missing dependencies and try again.")
        sys.exit(1)
