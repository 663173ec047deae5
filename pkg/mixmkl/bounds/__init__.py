"""Complexity estimators and generalization bound formulas."""

from .complexity import empirical_chaos_complexity, empirical_rademacher
from .formulas import (
    ETA_0,
    GENERALIZATION_KINDS,
    RADEMACHER_KINDS,
    BoundInputs,
    BoundReport,
    bound_sweep,
    evaluate,
    generalization_bound,
    m_dependence,
    margin_sweep,
    rademacher_bound,
)

__all__ = [
    "ETA_0",
    "GENERALIZATION_KINDS",
    "RADEMACHER_KINDS",
    "BoundInputs",
    "BoundReport",
    "bound_sweep",
    "empirical_chaos_complexity",
    "empirical_rademacher",
    "evaluate",
    "generalization_bound",
    "m_dependence",
    "margin_sweep",
    "rademacher_bound",
]
