"""Chain pools and their aggregated mixing quantities."""

from .model import (
    Chain,
    ChainPool,
    chain_from_dict,
    chain_to_dict,
    load_pool,
    make_chain,
    make_pool,
    pool_from_dict,
    pool_to_dict,
)
from .summary import (
    PoolSummary,
    marton_block,
    marton_bound,
    marton_matrix_norm,
    partition_sizes,
    pool_summary,
    symmetrization_offset,
)

__all__ = [
    "Chain",
    "ChainPool",
    "PoolSummary",
    "chain_from_dict",
    "chain_to_dict",
    "load_pool",
    "make_chain",
    "make_pool",
    "marton_block",
    "marton_bound",
    "marton_matrix_norm",
    "partition_sizes",
    "pool_from_dict",
    "pool_summary",
    "pool_to_dict",
    "symmetrization_offset",
]
