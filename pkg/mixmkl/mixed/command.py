"""Generate command implementation."""

import argparse

import numpy as np

from ..pool.model import load_pool
from ..shared import build_report, format_output, log_info, log_success
from .simulate import emit_labels, generate_features, write_dataset_csv


def cmd_generate(args: argparse.Namespace) -> int:
    """Simulate a mixed dataset and write it as CSV."""
    pool = load_pool(args.spec, args.sample)
    if not args.quiet:
        log_info(f"Using seed {args.seed}")
        log_info(
            f"Simulating {args.n} samples from {pool.size} chain(s) ({args.mode})..."
        )

    ds = generate_features(pool, args.n, args.seed, args.mode)
    if not args.unlabeled:
        ds = emit_labels(ds, pool, args.seed)
    if args.csv:
        write_dataset_csv(ds, args.csv)
        log_success(f"Dataset written to {args.csv}")

    per_chain = {
        str(chain): int(np.sum(ds.chain_ids == chain)) for chain in range(pool.size)
    }
    result = {
        "n": ds.n,
        "samples_per_chain": per_chain,
        "feature_dim": pool.feature_dim,
    }
    if ds.labels is not None:
        result["positive_fraction"] = float(np.mean(ds.labels == 1))
    config = {
        "spec": args.spec,
        "sample": args.sample,
        "n": args.n,
        "seed": args.seed,
        "mode": args.mode,
        "labels": not args.unlabeled,
    }
    format_output(build_report("generate", config, result), args.format, args.output)
    return 0
