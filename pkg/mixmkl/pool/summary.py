"""Aggregated mixing quantities over a pool of chains."""

import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from ..chain.core import ChainAnalysis, analyze_chain, chi_divergence_norm
from ..shared.config import AnalysisOptions, worker_count
from ..shared.errors import ChainError, ConfigError, DegenerateGapError
from .model import ChainPool

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class PoolSummary:
    """Per-chain analyses and their pool-level aggregates."""

    per_chain: tuple[ChainAnalysis, ...]
    weights: FloatArray
    tau_min: float
    gamma_aps: float
    t_amix: dict[float, int]
    eta: float
    chi_norms: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "tau_min": self.tau_min,
            "gamma_aps": self.gamma_aps,
            "t_amix": {f"{eps:g}": t for eps, t in sorted(self.t_amix.items())},
            "eta": self.eta,
            "per_chain": [
                {
                    "index": index,
                    "weight": float(weight),
                    "chi_norm": chi,
                    **a.to_dict(),
                }
                for index, (a, weight, chi) in enumerate(
                    zip(self.per_chain, self.weights, self.chi_norms)
                )
            ],
        }


def _analyze_all(
    pool: ChainPool, options: Optional[AnalysisOptions]
) -> tuple[ChainAnalysis, ...]:
    workers = min(worker_count(), pool.size)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(analyze_chain, chain.matrix, options)
            for chain in pool.chains
        ]
        analyses = []
        # results are collected in chain order, whatever the completion order
        for index, future in enumerate(futures):
            try:
                analyses.append(future.result())
            except ChainError as e:
                raise e.for_chain(index) from e
    return tuple(analyses)


def pool_summary(
    pool: ChainPool, options: Optional[AnalysisOptions] = None
) -> PoolSummary:
    """tau_min, gamma_aps, t_amix, eta and the per-chain quantities of a pool."""
    options = options or AnalysisOptions()
    analyses = _analyze_all(pool, options)

    chi_norms = []
    ratios = []
    for index, analysis in enumerate(analyses):
        try:
            chi_norms.append(chi_divergence_norm(pool.initial, analysis.pi))
        except ChainError as e:
            raise e.for_chain(index) from e
        ratios.append(float(np.max(pool.initial.probs / analysis.pi.probs)))

    root_sum = sum(
        math.sqrt(float(mu) * a.tau_min) for mu, a in zip(pool.weights, analyses)
    )
    grid = analyses[0].t_mix.keys()
    return PoolSummary(
        per_chain=analyses,
        weights=pool.weights,
        tau_min=root_sum**2,
        gamma_aps=min(a.gamma_ps for a in analyses),
        t_amix={eps: max(a.t_mix[eps] for a in analyses) for eps in grid},
        eta=max(ratios),
        chi_norms=tuple(chi_norms),
    )


def symmetrization_offset(
    pool: ChainPool,
    n: int,
    M: float,
    summary: Optional[PoolSummary] = None,
) -> tuple[float, float]:
    """(A_n, B_n); B_n is A_n at M = 1."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    if M < 0.0:
        raise ConfigError("M must be non-negative")
    summary = summary or pool_summary(pool)

    def offset(scale: float) -> float:
        values = []
        for index, (analysis, chi) in enumerate(
            zip(summary.per_chain, summary.chi_norms)
        ):
            gap = 1.0 - analysis.spectral.lam
            if gap <= 0.0:
                raise DegenerateGapError("lambda = 1, the offset is unbounded", index)
            first = 2.0 * scale / (n * gap)
            second = 64.0 * scale**2 / (n**2 * gap**2) * chi
            values.append(math.sqrt(first + second))
        return max(values)

    return offset(M), offset(1.0)


def partition_sizes(weights: Sequence[float] | FloatArray, n: int) -> list[int]:
    """Block sizes close to mu_P * n that sum to n.

    Floors are topped up by largest remainder; equal remainders favour the
    earlier chain.
    """
    raw = np.asarray(weights, dtype=float) * n
    sizes = np.floor(raw).astype(int)
    shortfall = n - int(sizes.sum())
    remainders = raw - sizes
    order = sorted(range(len(sizes)), key=lambda i: (-round(remainders[i], 9), i))
    for i in order[:shortfall]:
        sizes[i] += 1
    return [int(size) for size in sizes]


def marton_block(size: int, eps: float) -> FloatArray:
    """Upper-triangular block with rows (1, 1, eps, eps^2, ...)."""
    offsets = np.arange(size)[np.newaxis, :] - np.arange(size)[:, np.newaxis]
    block = np.power(eps, np.clip(offsets - 1, 0, None).astype(float))
    block[offsets == 0] = 1.0
    block[offsets < 0] = 0.0
    return block


def marton_matrix_norm(
    pool: ChainPool,
    n: int,
    c: float,
    epsilon: float | Sequence[float] | None = None,
    summary: Optional[PoolSummary] = None,
) -> float:
    """||Gamma C(c)|| for the block-diagonal mixing matrix of a mixed sequence.

    ``epsilon`` defaults to the one-step TV decay d_P(1) of each chain.
    """
    if n < 1:
        raise ConfigError("n must be at least 1")
    if c <= 0.0:
        raise ConfigError("c must be positive")
    if epsilon is None:
        summary = summary or pool_summary(pool)
        per_block = [a.d1 for a in summary.per_chain]
    elif isinstance(epsilon, (int, float)):
        per_block = [float(epsilon)] * pool.size
    else:
        per_block = [float(e) for e in epsilon]
    if len(per_block) != pool.size or not all(0.0 <= e < 1.0 for e in per_block):
        raise ConfigError("need one epsilon in [0, 1) per chain")

    blocks = [
        marton_block(size, eps)
        for size, eps in zip(partition_sizes(pool.weights, n), per_block)
        if size > 0
    ]
    gamma = scipy.linalg.block_diag(*blocks)
    return float(np.linalg.norm(gamma @ np.full(n, c)))


def marton_bound(summary: PoolSummary, n: int, c: float) -> float:
    """c * sqrt(n * tau_min), the bound the mixing-matrix norm must respect."""
    return c * math.sqrt(n * summary.tau_min)
