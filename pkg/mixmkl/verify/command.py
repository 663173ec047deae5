"""Verify command implementation."""

import argparse
from typing import Any

from ..shared import build_report, emit_report, log_error, log_info, log_success
from ..shared.errors import ConfigError
from .harness import (
    ExperimentConfig,
    load_config,
    verify_bernstein,
    verify_generalization,
    verify_mcdiarmid,
    verify_spectral_relations,
    verify_symmetrization,
)

_OVERRIDES = (
    "n",
    "trials",
    "seed",
    "mode",
    "runs",
    "delta",
    "alpha",
    "iterations",
    "t_grid",
    "u_grid",
    "m_grid",
    "g",
    "n_functions",
)


def _config(args: argparse.Namespace) -> ExperimentConfig:
    overrides: dict[str, Any] = {key: getattr(args, key, None) for key in _OVERRIDES}
    if getattr(args, "force_zero", False):
        overrides["force_zero"] = True
    if not (args.config or args.spec or args.sample):
        raise ConfigError("verify needs --config, --spec or --sample")
    return load_config(args.config, args.spec, args.sample, **overrides)


def cmd_verify(args: argparse.Namespace) -> int:
    """Run one verification check; exit code 2 when it fails."""
    cfg = _config(args)
    check = args.verify_command
    if not args.quiet:
        log_info(f"Using seed {cfg.seed}")
        log_info(f"Running {check} check...")

    match check:
        case "mcdiarmid":
            report: Any = verify_mcdiarmid(cfg)
            rows = report.rows()
        case "bernstein":
            report = verify_bernstein(cfg)
            rows = report.rows()
        case "symmetrization":
            report = verify_symmetrization(cfg)
            rows = [report.to_dict()]
        case "generalization":
            report = verify_generalization(cfg)
            rows = report.m_scaling
        case "spectral":
            report = verify_spectral_relations(cfg.pool, cfg.options)
            rows = [relation.to_dict() for relation in report.relations]
        case _:
            raise ConfigError(f"unknown verify check {check!r}")

    full = build_report(f"verify {check}", cfg.to_dict(), report.to_dict())
    emit_report(full, args, rows)
    if report.passed:
        log_success(f"{check} check passed")
        return 0
    log_error(f"{check} check failed")
    return 2
