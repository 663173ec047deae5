"""Simulation of interleaved samples from a pool of Markov chains."""

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Literal, Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from ..pool.model import Chain, ChainPool
from ..pool.summary import partition_sizes
from ..shared.errors import ChainError, ConfigError, DimensionMismatchError
from ..shared.rng import stream

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]
Mode = Literal["probabilistic", "proportional"]
MODES: tuple[str, ...] = ("probabilistic", "proportional")


@dataclass(frozen=True)
class MixedDataset:
    """Ordered samples (feature, label, chain id, state id)."""

    features: FloatArray
    chain_ids: IntArray
    state_ids: IntArray
    labels: Optional[IntArray] = None

    @property
    def n(self) -> int:
        return int(self.chain_ids.shape[0])

    def partitions(self) -> dict[int, IntArray]:
        """T_P: sample indices of each chain, in sequence order."""
        return {
            int(chain): np.flatnonzero(self.chain_ids == chain)
            for chain in np.unique(self.chain_ids)
        }

    def require_labels(self) -> IntArray:
        if self.labels is None:
            raise ConfigError("dataset has no labels; run emit_labels first")
        return self.labels

    def with_labels(self, labels: IntArray) -> "MixedDataset":
        return replace(self, labels=labels)


@dataclass(frozen=True)
class BatchCounts:
    """Per-trial state visit counts, optionally with Rademacher-signed counts."""

    counts: IntArray
    signed: Optional[IntArray] = None

    def require_signed(self) -> IntArray:
        if self.signed is None:
            raise ConfigError("counts were simulated without Rademacher signs")
        return self.signed


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")


def _cumulative(probs: FloatArray) -> FloatArray:
    cum = np.cumsum(probs, axis=-1)
    cum[..., -1] = 1.0
    return cum


def assign_chains(pool: ChainPool, n: int, seed: int, mode: Mode) -> IntArray:
    """Chain index of every sample position."""
    _check_mode(mode)
    if mode == "proportional":
        sizes = partition_sizes(pool.weights, n)
        return np.repeat(np.arange(pool.size), sizes).astype(np.int64)
    rng = stream(seed, "assign")
    return rng.choice(pool.size, size=n, p=pool.weights).astype(np.int64)


def sample_path(
    chain: Chain, initial: FloatArray, length: int, rng: np.random.Generator
) -> IntArray:
    """One trajectory of ``length`` states started from ``initial``."""
    cum = _cumulative(chain.matrix.rows)
    last = chain.n_states - 1
    draws = rng.random(length)
    states = np.empty(length, dtype=np.int64)
    if length == 0:
        return states
    first = np.searchsorted(_cumulative(initial), draws[0], side="right")
    states[0] = min(int(first), last)
    for i in range(1, length):
        row = cum[states[i - 1]]
        states[i] = min(int(np.searchsorted(row, draws[i], side="right")), last)
    return states


def generate_features(
    pool: ChainPool, n: int, seed: int = 0, mode: Mode = "probabilistic"
) -> MixedDataset:
    """Unlabelled mixed dataset of ``n`` samples."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    chain_ids = assign_chains(pool, n, seed, mode)
    states = np.empty(n, dtype=np.int64)
    features = np.empty((n, pool.feature_dim))
    for index, chain in enumerate(pool.chains):
        positions = np.flatnonzero(chain_ids == index)
        if positions.size == 0:
            continue
        path = sample_path(
            chain, pool.initial.probs, positions.size, stream(seed, "path", index)
        )
        states[positions] = path
        features[positions] = chain.embedding[path]
    return MixedDataset(features=features, chain_ids=chain_ids, state_ids=states)


def emit_labels(ds: MixedDataset, pool: ChainPool, seed: int = 0) -> MixedDataset:
    """Attach HMM labels: s(x) with probability 1 - flip(x), -s(x) otherwise."""
    labels = np.empty(ds.n, dtype=np.int64)
    for index, positions in ds.partitions().items():
        chain = pool.chains[index]
        try:
            flips = chain.flips()
        except ChainError as e:
            raise e.for_chain(index) from e
        states = ds.state_ids[positions]
        signs = chain.emission_sign[states].astype(np.int64)
        draws = stream(seed, "label", index).random(positions.size)
        labels[positions] = np.where(draws < flips[states], -signs, signs)
    return ds.with_labels(labels)


def simulate_dataset(
    pool: ChainPool, n: int, seed: int = 0, mode: Mode = "probabilistic"
) -> MixedDataset:
    """Features and labels in one call."""
    return emit_labels(generate_features(pool, n, seed, mode), pool, seed)


def simulate_counts(
    pool: ChainPool,
    n: int,
    trials: int,
    seed: int = 0,
    mode: Mode = "probabilistic",
    with_signs: bool = False,
) -> BatchCounts:
    """State visit counts of ``trials`` independent mixed sequences of length n.

    All trials advance together, one chain at a time, so the cost is
    O(n * trials) vector work instead of a Python loop per trial.
    """
    _check_mode(mode)
    if n < 1 or trials < 1:
        raise ConfigError("n and trials must be at least 1")
    k, s = pool.size, pool.n_states
    if mode == "proportional":
        sizes = np.tile(np.asarray(partition_sizes(pool.weights, n)), (trials, 1))
    else:
        sizes = stream(seed, "assign").multinomial(n, pool.weights, size=trials)

    rows = np.arange(trials)
    counts = np.zeros((trials, s), dtype=np.int64)
    signed = np.zeros((trials, s), dtype=np.int64) if with_signs else None
    initial_cum = _cumulative(pool.initial.probs)
    for index in range(k):
        lengths = sizes[:, index]
        steps = int(lengths.max())
        if steps == 0:
            continue
        cum = _cumulative(pool.chains[index].matrix.rows)
        rng = stream(seed, "path", index)
        sign_rng = stream(seed, "signs", index)
        states = np.minimum(
            np.searchsorted(initial_cum, rng.random(trials), side="right"), s - 1
        )
        for step in range(steps):
            active = (lengths > step).astype(np.int64)
            counts[rows, states] += active
            if signed is not None:
                signs = 2 * sign_rng.integers(0, 2, size=trials) - 1
                signed[rows, states] += active * signs
            draws = rng.random(trials)
            crossed = (draws[:, np.newaxis] >= cum[states]).sum(axis=1)
            states = np.minimum(crossed, s - 1)
    return BatchCounts(counts=counts, signed=signed)


def write_dataset_csv(ds: MixedDataset, path: str | Path) -> None:
    """Columns index, chain_id, state_id, label, f_1..f_d."""
    frame = pd.DataFrame(
        {
            "index": np.arange(ds.n),
            "chain_id": ds.chain_ids,
            "state_id": ds.state_ids,
            "label": pd.array(
                ds.labels if ds.labels is not None else [None] * ds.n, dtype="Int64"
            ),
        }
    )
    for j in range(ds.features.shape[1]):
        frame[f"f_{j + 1}"] = ds.features[:, j]
    frame.to_csv(path, index=False, float_format="%.17g")


def read_dataset_csv(path: str | Path) -> MixedDataset:
    """Inverse of write_dataset_csv."""
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError) as e:
        raise ConfigError(f"cannot read dataset {path}: {e}") from e
    required = {"index", "chain_id", "state_id", "label"}
    if not required.issubset(frame.columns):
        raise ConfigError(f"dataset {path} lacks columns {sorted(required)}")
    feature_cols = [col for col in frame.columns if col.startswith("f_")]
    if not feature_cols:
        raise DimensionMismatchError(f"dataset {path} has no feature columns")
    frame = frame.sort_values("index")
    labels = frame["label"]
    return MixedDataset(
        features=frame[feature_cols].to_numpy(dtype=np.float64),
        chain_ids=frame["chain_id"].to_numpy(dtype=np.int64),
        state_ids=frame["state_id"].to_numpy(dtype=np.int64),
        labels=None if labels.isna().all() else labels.to_numpy(dtype=np.int64),
    )
