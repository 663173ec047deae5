"""Bound command implementation."""

import argparse
from collections.abc import Callable
from dataclasses import replace
from typing import Any, Optional

from ..pool.model import load_pool
from ..pool.summary import pool_summary, symmetrization_offset
from ..shared import build_report, emit_report, log_info
from ..shared.errors import ConfigError
from .formulas import BoundInputs, bound_sweep, evaluate


def _inputs(
    args: argparse.Namespace, n: int
) -> tuple[BoundInputs, Optional[Callable[[int], float]]]:
    """Bound inputs at n, plus a per-n B_n when B_n comes from the pool."""
    inputs = BoundInputs(
        n=n,
        m=args.m,
        B=args.B,
        kappa=args.kappa,
        delta=args.delta,
        alpha=args.alpha,
        tau_min=args.tau_min,
        b_n=args.b_n,
        q=args.q,
        r=args.r,
        d_k=args.d_k,
        c_chaos=args.c_chaos,
    )
    derived = inputs.tau_min is not None and inputs.b_n is not None
    if not (args.spec or args.sample) or derived:
        return inputs, None
    pool = load_pool(args.spec, args.sample)
    if not args.quiet:
        log_info("Deriving tau_min and B_n from the pool...")
    summary = pool_summary(pool)
    tau_min = inputs.tau_min if inputs.tau_min is not None else summary.tau_min
    if inputs.b_n is not None:
        return replace(inputs, tau_min=tau_min), None

    def b_n_for(size: int) -> float:
        return symmetrization_offset(pool, size, 1.0, summary)[1]

    return replace(inputs, tau_min=tau_min, b_n=b_n_for(n)), b_n_for


def cmd_bound(args: argparse.Namespace) -> int:
    """Evaluate a Rademacher or generalization bound, optionally over a sweep."""
    if args.sweep_n and args.sweep_m:
        raise ConfigError("choose one of --sweep-n and --sweep-m")
    n = args.n if args.n is not None else (args.sweep_n[0] if args.sweep_n else None)
    if n is None:
        raise ConfigError("--n is required")
    inputs, b_n_for = _inputs(args, n)

    report = evaluate(args.kind, inputs, args.rademacher)
    result: dict[str, Any] = report.to_dict()
    rows: list[dict[str, Any]] = []
    if args.sweep_n:
        rows = bound_sweep(
            args.kind, inputs, "n", args.sweep_n, args.rademacher, b_n_for
        )
    elif args.sweep_m:
        rows = bound_sweep(args.kind, inputs, "m", args.sweep_m, args.rademacher)
    if rows:
        result["sweep"] = rows

    config = {
        "kind": args.kind,
        "spec": args.spec,
        "sample": args.sample,
        "rademacher": args.rademacher,
        "sweep_n": args.sweep_n,
        "sweep_m": args.sweep_m,
        **inputs.to_dict(),
    }
    emit_report(build_report("bound", config, result), args, rows)
    return 0
