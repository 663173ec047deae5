"""Numerical tolerances, analysis options and environment configuration."""

import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError

THREADS_ENV = "MIXMKL_THREADS"


@dataclass(frozen=True)
class Tolerances:
    """Every numerical tolerance used by the library."""

    stochastic: float = 1e-9
    stationary: float = 1e-12
    reversible: float = 1e-10
    unit_eigenvalue: float = 1e-8
    psd: float = 1e-8
    weights: float = 1e-10
    never_mixes: float = 1e-12


DEFAULT_TOLERANCES = Tolerances()

DEFAULT_EPSILON_GRID = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45)


@dataclass(frozen=True)
class AnalysisOptions:
    """Options for single-chain and pool analysis."""

    k_max: int = 25
    t_max: Optional[int] = None
    epsilon_grid: tuple[float, ...] = DEFAULT_EPSILON_GRID
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self) -> None:
        if self.k_max < 1:
            raise ConfigError("k_max must be at least 1")
        if self.t_max is not None and self.t_max < 1:
            raise ConfigError("t_max must be at least 1")
        if not self.epsilon_grid or not all(
            0.0 < eps < 1.0 for eps in self.epsilon_grid
        ):
            raise ConfigError("epsilon grid must be non-empty with values in (0, 1)")


def worker_count() -> int:
    """Number of worker threads, capped by MIXMKL_THREADS."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return min(4, os.cpu_count() or 1)
    try:
        workers = int(raw)
    except ValueError as e:
        raise ConfigError(
            f"{THREADS_ENV} must be a positive integer, got {raw!r}"
        ) from e
    if workers < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return workers
