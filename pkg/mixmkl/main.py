"""Main entry point for mixmkl."""

import argparse
import sys
from typing import Optional, Sequence

from . import __description__, __name__, __version__
from .bounds.formulas import GENERALIZATION_KINDS, RADEMACHER_KINDS
from .mixed.simulate import MODES
from .shared import (
    MixMklError,
    add_common_args,
    check_dependencies,
    log_error,
    log_info,
    set_verbose,
)


def _add_simulation_args(parser_obj: argparse.ArgumentParser, n_default: int) -> None:
    parser_obj.add_argument(
        "--n", type=int, default=n_default, help=f"Sample size (default: {n_default})"
    )
    parser_obj.add_argument(
        "--mode",
        choices=MODES,
        default="probabilistic",
        help="Chain assignment: probabilistic draws or proportional blocks",
    )


def _add_verify_parser(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
    name: str,
    help_text: str,
) -> argparse.ArgumentParser:
    verify_parser = subparsers.add_parser(name, help=help_text)
    add_common_args(verify_parser, seed_default=None)
    verify_parser.add_argument("--config", help="Experiment config (YAML or JSON)")
    verify_parser.add_argument("--n", type=int, help="Sample size")
    verify_parser.add_argument("--trials", type=int, help="Monte Carlo trials (>= 100)")
    verify_parser.add_argument("--mode", choices=MODES, help="Chain assignment mode")
    return verify_parser


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser with all commands and options."""
    parser = argparse.ArgumentParser(
        prog=__name__,
        description=__description__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  mixmkl chain --sample two-state               # Spectral analysis of one chain
  mixmkl pool --sample desk --n 200             # Pool aggregates, A_n and B_n
  mixmkl generate --sample six-state --csv d.csv
  mixmkl train --sample six-state --n 400 --delta 0.5
  mixmkl bound thm1 --n 100 --m 3 --alpha 0.1 --tau-min 4 --b-n 0.2
  mixmkl verify spectral --sample desk          # Exit 2 if any relation fails
        """,
    )

    parser.add_argument(
        "--version", action="version", version=f"{__name__} {__version__}"
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Chain command
    chain_parser = subparsers.add_parser(
        "chain", help="Exact spectral and mixing analysis of single chains"
    )
    add_common_args(chain_parser)
    chain_parser.add_argument(
        "--k-max", type=int, default=25, help="Pseudo-gap horizon"
    )
    chain_parser.add_argument("--t-max", type=int, help="TV profile horizon")
    chain_parser.add_argument(
        "--epsilon", type=float, nargs="+", help="Accuracy grid for t_mix"
    )
    chain_parser.add_argument(
        "--profile", action="store_true", help="Include the TV decay profile"
    )
    chain_parser.add_argument(
        "--random", type=int, metavar="STATES", help="Analyze a random ergodic chain"
    )
    chain_parser.add_argument(
        "--reversible", action="store_true", help="Make the random chain reversible"
    )

    # Pool command
    pool_parser = subparsers.add_parser(
        "pool", help="Aggregated mixing quantities of a chain pool"
    )
    add_common_args(pool_parser)
    pool_parser.add_argument("--k-max", type=int, default=25, help="Pseudo-gap horizon")
    pool_parser.add_argument("--n", type=int, help="Sample size for A_n, B_n, Marton")
    pool_parser.add_argument(
        "--M",
        dest="sup_norm",
        type=float,
        default=1.0,
        help="Sup norm of the function class (default: 1)",
    )
    pool_parser.add_argument(
        "--c", type=float, default=1.0, help="Bounded-difference constant (default: 1)"
    )

    # Generate command
    generate_parser = subparsers.add_parser(
        "generate", help="Simulate a labelled mixed dataset"
    )
    add_common_args(generate_parser)
    _add_simulation_args(generate_parser, 200)
    generate_parser.add_argument(
        "--unlabeled", action="store_true", help="Skip label emission"
    )

    # Train command
    train_parser = subparsers.add_parser(
        "train", help="Train a multiple-kernel margin classifier"
    )
    add_common_args(train_parser)
    _add_simulation_args(train_parser, 400)
    train_parser.add_argument("--data", help="Dataset CSV written by generate")
    train_parser.add_argument("--family", help="Kernel family JSON/YAML")
    train_parser.add_argument("--delta", type=float, default=0.5, help="Margin")
    train_parser.add_argument("--iterations", type=int, default=500)
    train_parser.add_argument("--eta-step", type=float, default=0.1)
    train_parser.add_argument("--alpha", type=float, default=0.05, help="Confidence")
    train_parser.add_argument(
        "--margin-grid", type=float, nargs="+", help="Margins for the bound sweep"
    )
    train_parser.add_argument(
        "--rademacher-trials",
        type=int,
        default=0,
        help="Also estimate the empirical Rademacher complexity",
    )
    train_parser.add_argument("--model-out", help="Write the model as JSON")

    # Bound command
    bound_parser = subparsers.add_parser("bound", help="Evaluate a bound formula")
    add_common_args(bound_parser)
    bound_parser.add_argument(
        "kind",
        choices=RADEMACHER_KINDS + GENERALIZATION_KINDS,
        help="Bound to evaluate",
    )
    bound_parser.add_argument("--n", type=int, help="Sample size")
    bound_parser.add_argument("--m", type=int, default=1, help="Number of kernels")
    bound_parser.add_argument("--B", type=float, default=1.0, help="RKHS radius")
    bound_parser.add_argument("--kappa", type=float, default=1.0)
    bound_parser.add_argument("--delta", type=float, default=1.0, help="Margin")
    bound_parser.add_argument("--alpha", type=float, default=0.05, help="Confidence")
    bound_parser.add_argument("--tau-min", type=float)
    bound_parser.add_argument("--b-n", type=float)
    bound_parser.add_argument("--q", type=float)
    bound_parser.add_argument("--r", type=float)
    bound_parser.add_argument("--d-k", type=int, help="Pseudo-dimension of the family")
    bound_parser.add_argument("--c-chaos", type=float, default=1.0)
    bound_parser.add_argument(
        "--rademacher", type=float, help="Measured Rademacher complexity"
    )
    bound_parser.add_argument("--sweep-n", type=int, nargs="+")
    bound_parser.add_argument("--sweep-m", type=int, nargs="+")

    # Verify subcommand group
    verify_parser = subparsers.add_parser(
        "verify", help="Monte Carlo verification of the inequalities"
    )
    verify_subparsers = verify_parser.add_subparsers(
        dest="verify_command", help="Verify commands"
    )

    mcdiarmid_parser = _add_verify_parser(
        verify_subparsers, "mcdiarmid", "Mixed McDiarmid tail bound"
    )
    mcdiarmid_parser.add_argument("--t-grid", type=float, nargs="+")
    mcdiarmid_parser.add_argument("--g", type=float, nargs="+", help="Per-state g")

    bernstein_parser = _add_verify_parser(
        verify_subparsers, "bernstein", "Mixed Bernstein tail bound"
    )
    bernstein_parser.add_argument("--u-grid", type=float, nargs="+")
    bernstein_parser.add_argument("--g", type=float, nargs="+", help="Per-state g")

    symmetrization_parser = _add_verify_parser(
        verify_subparsers, "symmetrization", "Symmetrization inequality"
    )
    symmetrization_parser.add_argument("--n-functions", type=int)

    generalization_parser = _add_verify_parser(
        verify_subparsers, "generalization", "Coverage of the thm1 generalization bound"
    )
    generalization_parser.add_argument("--runs", type=int)
    generalization_parser.add_argument("--delta", type=float)
    generalization_parser.add_argument("--alpha", type=float)
    generalization_parser.add_argument("--iterations", type=int)
    generalization_parser.add_argument("--m-grid", type=int, nargs="+")
    generalization_parser.add_argument(
        "--force-zero", action="store_true", help="Evaluate the zero model"
    )

    _add_verify_parser(verify_subparsers, "spectral", "Gap and mixing-time relations")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Execute the main entry point for mixmkl and return the exit code."""
    check_dependencies()

    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 0

    set_verbose(getattr(args, "verbose", False))
    try:
        # Route to appropriate command using pattern matching (Python 3.10+)
        match args.command:
            case "chain":
                from .chain.command import cmd_chain

                return cmd_chain(args)
            case "pool":
                from .pool.command import cmd_pool

                return cmd_pool(args)
            case "generate":
                from .mixed.command import cmd_generate

                return cmd_generate(args)
            case "train":
                from .learn.command import cmd_train

                return cmd_train(args)
            case "bound":
                from .bounds.command import cmd_bound

                return cmd_bound(args)
            case "verify":
                if not getattr(args, "verify_command", None):
                    log_error("Verify subcommand required. Use --help for options.")
                    return 1

                from .verify.command import cmd_verify

                return cmd_verify(args)
            case _:
                log_error(f"Unknown command: {args.command}")
                return 1
    except MixMklError as e:
        log_error(str(e))
        return e.exit_code
    except KeyboardInterrupt:
        log_info("Operation cancelled by user")
        return 1
    except Exception as e:
        log_error(f"Unexpected error: {e}")
        if getattr(args, "verbose", False):
            import traceback

            traceback.print_exc()
        return 1
