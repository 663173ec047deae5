"""Pool command implementation."""

import argparse
from typing import Any

from ..shared import AnalysisOptions, build_report, emit_report, log_info, log_warn
from .model import load_pool, pool_to_dict
from .summary import (
    marton_bound,
    marton_matrix_norm,
    partition_sizes,
    pool_summary,
    symmetrization_offset,
)


def cmd_pool(args: argparse.Namespace) -> int:
    """Aggregate mixing quantities of a chain pool."""
    pool = load_pool(args.spec, args.sample)
    options = AnalysisOptions(k_max=args.k_max)
    if not args.quiet:
        log_info(f"Analyzing pool of {pool.size} chain(s) on {pool.n_states} states...")

    summary = pool_summary(pool, options)
    result: dict[str, Any] = summary.to_dict()

    if args.n is not None:
        a_n, b_n = symmetrization_offset(pool, args.n, args.sup_norm, summary)
        result["symmetrization"] = {
            "n": args.n,
            "M": args.sup_norm,
            "A_n": a_n,
            "B_n": b_n,
        }
        norm = marton_matrix_norm(pool, args.n, args.c, summary=summary)
        bound = marton_bound(summary, args.n, args.c)
        result["marton"] = {
            "n": args.n,
            "c": args.c,
            "partition_sizes": partition_sizes(pool.weights, args.n),
            "norm": norm,
            "bound": bound,
            "holds": norm <= bound,
        }
        if norm > bound and not args.quiet:
            log_warn("Mixing-matrix norm exceeds c sqrt(n tau_min) for this pool")

    rows = [
        {
            "chain": index,
            "weight": float(weight),
            "gamma_ps": analysis.gamma_ps,
            "gamma_star": analysis.spectral.gamma_star,
            "t_mix": analysis.t_mix[0.25],
            "tau_min": analysis.tau_min,
            "chi_norm": chi,
        }
        for index, (analysis, weight, chi) in enumerate(
            zip(summary.per_chain, summary.weights, summary.chi_norms)
        )
    ]
    config = {
        "spec": args.spec,
        "sample": args.sample,
        "k_max": options.k_max,
        "n": args.n,
        "M": args.sup_norm,
        "c": args.c,
        "pool": pool_to_dict(pool),
    }
    emit_report(build_report("pool", config, result), args, rows)
    return 0
