"""Shared utilities for mixmkl."""

from .cli import (
    Colors,
    add_common_args,
    add_output_args,
    check_dependencies,
    colors,
    log_debug,
    log_error,
    log_info,
    log_success,
    log_warn,
    set_verbose,
)
from .config import (
    DEFAULT_TOLERANCES,
    AnalysisOptions,
    Tolerances,
    worker_count,
)
from .data import get_sample_kernel_family, get_sample_pool
from .errors import MixMklError, ValidationError, VerificationFailure
from .io import read_structured, require_mapping
from .output import (
    build_report,
    emit_report,
    format_output,
    format_table,
    render,
    to_plain,
    write_csv,
)
from .rng import stream

__all__ = [
    # CLI utilities
    "Colors",
    "add_common_args",
    "add_output_args",
    "check_dependencies",
    "colors",
    "log_debug",
    "log_error",
    "log_info",
    "log_success",
    "log_warn",
    "set_verbose",
    # Configuration
    "DEFAULT_TOLERANCES",
    "AnalysisOptions",
    "Tolerances",
    "worker_count",
    # Data utilities
    "get_sample_kernel_family",
    "get_sample_pool",
    # Errors
    "MixMklError",
    "ValidationError",
    "VerificationFailure",
    # Input
    "read_structured",
    "require_mapping",
    # Output utilities
    "build_report",
    "emit_report",
    "format_output",
    "format_table",
    "render",
    "to_plain",
    "write_csv",
    # Randomness
    "stream",
]
