"""Chain command implementation."""

import argparse
from typing import Any

from ..pool.model import load_pool
from ..shared import (
    AnalysisOptions,
    build_report,
    emit_report,
    log_info,
    stream,
)
from ..shared.errors import ChainError, ConfigError
from .core import analyze_chain, gap_mixing_relations, random_chain


def _options(args: argparse.Namespace) -> AnalysisOptions:
    if args.epsilon:
        return AnalysisOptions(
            k_max=args.k_max, t_max=args.t_max, epsilon_grid=tuple(args.epsilon)
        )
    return AnalysisOptions(k_max=args.k_max, t_max=args.t_max)


def cmd_chain(args: argparse.Namespace) -> int:
    """Exact spectral and mixing analysis of every chain in the input."""
    options = _options(args)
    if args.random:
        if not args.quiet:
            log_info(f"Using seed {args.seed}")
        rng = stream(args.seed, "random-chain")
        matrices = [random_chain(args.random, rng, args.reversible)]
    elif args.spec or args.sample:
        matrices = [chain.matrix for chain in load_pool(args.spec, args.sample).chains]
    else:
        raise ConfigError("one of --spec, --sample or --random is required")

    if not args.quiet:
        log_info(f"Analyzing {len(matrices)} chain(s)...")

    chains: list[dict[str, Any]] = []
    rows: list[dict[str, Any]] = []
    for index, matrix in enumerate(matrices):
        try:
            analysis = analyze_chain(matrix, options)
        except ChainError as e:
            raise e.for_chain(index) from e
        entry = {"index": index, **analysis.to_dict()}
        entry["relations"] = [r.to_dict() for r in gap_mixing_relations(analysis)]
        if args.profile:
            entry["tv_profile"] = analysis.profile.d.tolist()
        if args.random:
            entry["rows"] = matrix.rows.tolist()
        chains.append(entry)
        rows.extend(
            {"chain": index, "t": t, "d": float(d)}
            for t, d in enumerate(analysis.profile.d)
        )

    config = {
        "spec": args.spec,
        "sample": args.sample,
        "random": args.random,
        "reversible": args.reversible,
        "seed": args.seed,
        "k_max": options.k_max,
        "t_max": options.t_max,
        "epsilon_grid": list(options.epsilon_grid),
    }
    emit_report(build_report("chain", config, {"chains": chains}), args, rows)
    return 0
