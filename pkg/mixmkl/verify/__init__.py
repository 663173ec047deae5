"""Monte Carlo verification of the bounds."""

from .harness import (
    ComparisonReport,
    CoverageReport,
    ExperimentConfig,
    RelationReport,
    TailReport,
    config_from_dict,
    load_config,
    verify_bernstein,
    verify_generalization,
    verify_mcdiarmid,
    verify_spectral_relations,
    verify_symmetrization,
)

__all__ = [
    "ComparisonReport",
    "CoverageReport",
    "ExperimentConfig",
    "RelationReport",
    "TailReport",
    "config_from_dict",
    "load_config",
    "verify_bernstein",
    "verify_generalization",
    "verify_mcdiarmid",
    "verify_spectral_relations",
    "verify_symmetrization",
]
