"""Chains with emissions, and pools of chains with mixture weights."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..chain.core import (
    Distribution,
    TransitionMatrix,
    make_distribution,
    validate_chain,
)
from ..shared.config import DEFAULT_TOLERANCES, Tolerances
from ..shared.data import get_sample_pool
from ..shared.errors import (
    ConfigError,
    DimensionMismatchError,
    EmptyPoolError,
    MissingEmissionTableError,
)
from ..shared.io import read_structured, require_mapping

FloatArray = NDArray[np.float64]


def _frozen(values: ArrayLike) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


def default_signs(n_states: int) -> FloatArray:
    """+1 on even states, -1 on odd states."""
    return _frozen(np.where(np.arange(n_states) % 2 == 0, 1.0, -1.0))


@dataclass(frozen=True)
class Chain:
    """Transition matrix with per-state features and a label-emission table.

    A sample at state x gets label s(x) with probability 1 - flip(x) and -s(x)
    otherwise.
    """

    matrix: TransitionMatrix
    embedding: FloatArray
    emission_flip: Optional[FloatArray]
    emission_sign: FloatArray

    @property
    def n_states(self) -> int:
        return self.matrix.n_states

    def flips(self) -> FloatArray:
        if self.emission_flip is None:
            raise MissingEmissionTableError("chain has no emission_flip table")
        return self.emission_flip

    def positive_label_probability(self) -> FloatArray:
        """P(y = +1 | x) per state."""
        flip = self.flips()
        return np.where(self.emission_sign > 0, 1.0 - flip, flip)


def make_chain(
    rows: ArrayLike,
    embedding: Optional[ArrayLike] = None,
    emission_flip: Optional[ArrayLike] = None,
    emission_sign: Optional[ArrayLike] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Chain:
    matrix = validate_chain(rows, tolerances)
    n = matrix.n_states
    features = np.eye(n) if embedding is None else np.asarray(embedding, dtype=float)
    if features.ndim != 2 or features.shape[0] != n:
        raise DimensionMismatchError(
            f"embedding must have one row per state ({n}), got shape {features.shape}"
        )
    flip = None
    if emission_flip is not None:
        flip = np.asarray(emission_flip, dtype=float)
        if flip.shape != (n,) or np.any(flip < 0.0) or np.any(flip > 1.0):
            raise ConfigError("emission_flip needs one value in [0, 1] per state")
    sign = default_signs(n) if emission_sign is None else np.asarray(emission_sign)
    if sign.shape != (n,) or not np.all(np.isin(sign, (-1, 1))):
        raise ConfigError("emission_sign needs one value in {-1, +1} per state")
    return Chain(
        matrix=matrix,
        embedding=_frozen(features),
        emission_flip=None if flip is None else _frozen(flip),
        emission_sign=_frozen(sign),
    )


def chain_from_dict(
    data: Any, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Chain:
    """Build a chain from its JSON document."""
    doc = require_mapping(data, "chain")
    if "rows" not in doc:
        raise ConfigError("chain document needs 'rows'")
    chain = make_chain(
        doc["rows"],
        embedding=doc.get("embedding"),
        emission_flip=doc.get("emission_flip"),
        emission_sign=doc.get("emission_sign"),
        tolerances=tolerances,
    )
    if "states" in doc and int(doc["states"]) != chain.n_states:
        raise ConfigError(
            f"'states' says {doc['states']} but 'rows' has {chain.n_states} rows"
        )
    return chain


def chain_to_dict(chain: Chain) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "states": chain.n_states,
        "rows": chain.matrix.rows.tolist(),
        "embedding": chain.embedding.tolist(),
        "emission_sign": [int(s) for s in chain.emission_sign],
    }
    if chain.emission_flip is not None:
        doc["emission_flip"] = chain.emission_flip.tolist()
    return doc


@dataclass(frozen=True)
class ChainPool:
    """Chains with mixture weights mu_P and a shared initial distribution nu."""

    chains: tuple[Chain, ...]
    weights: FloatArray
    initial: Distribution

    @property
    def size(self) -> int:
        return len(self.chains)

    @property
    def n_states(self) -> int:
        return self.chains[0].n_states

    @property
    def feature_dim(self) -> int:
        return int(self.chains[0].embedding.shape[1])

    def with_initial(self, initial: Distribution) -> "ChainPool":
        return make_pool(self.chains, self.weights, initial.probs)


def make_pool(
    chains: Any,
    weights: ArrayLike,
    initial: Optional[ArrayLike] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ChainPool:
    chains = tuple(chains)
    if not chains:
        raise EmptyPoolError("pool has no chains")
    n = chains[0].n_states
    dim = chains[0].embedding.shape[1]
    for index, chain in enumerate(chains):
        if chain.n_states != n:
            raise DimensionMismatchError(
                f"chain {index} has {chain.n_states} states, chain 0 has {n}"
            )
        if chain.embedding.shape[1] != dim:
            raise DimensionMismatchError(
                f"chain {index} embeds into dimension {chain.embedding.shape[1]}, "
                f"chain 0 into {dim}"
            )
    mu = np.asarray(weights, dtype=float)
    if mu.shape != (len(chains),) or np.any(mu <= 0.0):
        raise ConfigError("every chain needs a positive weight")
    mu_dist = make_distribution(mu, tolerances)
    if initial is None:
        initial = np.full(n, 1.0 / n)
    nu = make_distribution(initial, tolerances)
    if nu.probs.shape != (n,):
        raise DimensionMismatchError(f"initial distribution must have {n} entries")
    return ChainPool(chains=chains, weights=mu_dist.probs, initial=nu)


def pool_from_dict(
    data: Any, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ChainPool:
    """Build a pool from a pool document, or a one-chain pool from a chain document."""
    doc = require_mapping(data, "pool")
    if "chains" not in doc:
        return make_pool([chain_from_dict(doc, tolerances)], [1.0], doc.get("initial"))
    entries = doc["chains"]
    if not isinstance(entries, list):
        raise ConfigError("'chains' must be a list")
    if not entries:
        raise EmptyPoolError("pool has no chains")
    chains = [chain_from_dict(entry, tolerances) for entry in entries]
    weights = [
        float(require_mapping(entry, "chain").get("weight", 1.0 / len(entries)))
        for entry in entries
    ]
    return make_pool(chains, weights, doc.get("initial"), tolerances)


def pool_to_dict(pool: ChainPool) -> dict[str, Any]:
    return {
        "chains": [
            {**chain_to_dict(chain), "weight": float(weight)}
            for chain, weight in zip(pool.chains, pool.weights)
        ],
        "initial": pool.initial.probs.tolist(),
    }


def load_pool(
    spec: Optional[str] = None,
    sample: Optional[str] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ChainPool:
    """Load a pool from a JSON/YAML file or a built-in sample name."""
    if sample:
        return pool_from_dict(get_sample_pool(sample), tolerances)
    if spec:
        return pool_from_dict(read_structured(Path(spec)), tolerances)
    raise ConfigError("either --spec or --sample is required")
