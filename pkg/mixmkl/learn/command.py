"""Train command implementation."""

import argparse
import json
from typing import Any, Optional

from ..bounds.complexity import empirical_rademacher
from ..bounds.formulas import BoundInputs, margin_sweep
from ..kernels.engine import KernelFamily, family_from_dict, kappa
from ..mixed.simulate import MixedDataset, read_dataset_csv, simulate_dataset
from ..pool.model import ChainPool, load_pool
from ..pool.summary import pool_summary, symmetrization_offset
from ..shared import (
    build_report,
    emit_report,
    get_sample_kernel_family,
    log_info,
    log_success,
    read_structured,
)
from ..shared.errors import ConfigError
from .mkl import (
    MklModel,
    TrainOptions,
    empirical_margin_error,
    estimation_error,
    train,
    true_error_exact,
)


def _family(args: argparse.Namespace) -> KernelFamily:
    doc = read_structured(args.family) if args.family else get_sample_kernel_family()
    return family_from_dict(doc)


def _dataset(
    args: argparse.Namespace, pool: Optional[ChainPool]
) -> MixedDataset:
    if args.data:
        return read_dataset_csv(args.data)
    if pool is None:
        raise ConfigError("train needs --data, or --spec/--sample to simulate data")
    if not args.quiet:
        log_info(f"Using seed {args.seed}")
        log_info(f"Simulating {args.n} training samples...")
    return simulate_dataset(pool, args.n, args.seed, args.mode)


def _margin_sweep(
    args: argparse.Namespace, model: MklModel, ds: MixedDataset, pool: ChainPool
) -> dict[str, Any]:
    summary = pool_summary(pool)
    _, b_n = symmetrization_offset(pool, ds.n, 1.0, summary)
    inputs = BoundInputs(
        n=ds.n,
        m=model.family.m,
        B=model.B,
        kappa=kappa(model.family, ds.features),
        delta=model.delta,
        alpha=args.alpha,
        tau_min=summary.tau_min,
        b_n=b_n,
    )
    errors = {
        delta: empirical_margin_error(model, ds, delta) for delta in args.margin_grid
    }
    return margin_sweep(errors, inputs, "thm1")


def cmd_train(args: argparse.Namespace) -> int:
    """Train a multiple-kernel margin classifier and report its errors."""
    pool = load_pool(args.spec, args.sample) if (args.spec or args.sample) else None
    ds = _dataset(args, pool)
    fam = _family(args)
    opts = TrainOptions(iterations=args.iterations, eta_step=args.eta_step)

    if not args.quiet:
        log_info(
            f"Training on {ds.n} samples with {fam.m} base kernel(s), "
            f"delta={args.delta}"
        )
    model = train(ds, fam, args.delta, opts)

    result: dict[str, Any] = {
        "objective": model.objective,
        "eta": model.eta.eta.tolist(),
        "rkhs_norm_squared": model.rkhs_norm_squared(),
        "kappa": kappa(fam, ds.features),
        "margin_error": empirical_margin_error(model, ds),
    }
    if pool is not None:
        result["true_error"] = true_error_exact(model, pool)
        result["estimation_error"] = estimation_error(model, ds, pool)
        if args.margin_grid:
            result["margin_sweep"] = _margin_sweep(args, model, ds, pool)
    if args.rademacher_trials:
        estimate, stderr = empirical_rademacher(
            ds, fam, args.rademacher_trials, args.seed
        )
        result["rademacher"] = {"estimate": estimate, "stderr": stderr}

    if args.model_out:
        try:
            with open(args.model_out, "w", encoding="utf-8") as f:
                json.dump(model.to_dict(), f, indent=2, sort_keys=True)
        except OSError as e:
            raise ConfigError(f"cannot write {args.model_out}: {e}") from e
        log_success(f"Model saved to {args.model_out}")

    config = {
        "spec": args.spec,
        "sample": args.sample,
        "data": args.data,
        "n": ds.n,
        "seed": args.seed,
        "mode": args.mode,
        "delta": args.delta,
        "iterations": opts.iterations,
        "eta_step": opts.eta_step,
        "alpha": args.alpha,
        "margin_grid": args.margin_grid,
        "family": fam.to_dict(),
    }
    rows = [
        {"iteration": i, "objective": value} for i, value in enumerate(model.history)
    ]
    emit_report(build_report("train", config, result), args, rows)
    return 0
