"""Single-chain spectral and mixing analysis."""

from .core import (
    ChainAnalysis,
    Distribution,
    MixingProfile,
    Relation,
    SpectralSummary,
    TransitionMatrix,
    analyze_chain,
    chi_divergence_norm,
    gap_mixing_relations,
    is_reversible,
    make_distribution,
    mixing_time,
    pseudo_spectral_gap,
    random_chain,
    spectral_gaps,
    stationary_distribution,
    tau_min_single,
    time_reversal,
    tv_decay_profile,
    validate_chain,
)

__all__ = [
    "ChainAnalysis",
    "Distribution",
    "MixingProfile",
    "Relation",
    "SpectralSummary",
    "TransitionMatrix",
    "analyze_chain",
    "chi_divergence_norm",
    "gap_mixing_relations",
    "is_reversible",
    "make_distribution",
    "mixing_time",
    "pseudo_spectral_gap",
    "random_chain",
    "spectral_gaps",
    "stationary_distribution",
    "tau_min_single",
    "time_reversal",
    "tv_decay_profile",
    "validate_chain",
]
