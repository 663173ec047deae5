"""Base kernels and L_q kernel families."""

from .engine import (
    CombinationWeights,
    KernelFamily,
    KernelSpec,
    combine,
    combined_kernel,
    cross_gram,
    family_from_dict,
    gram_matrix,
    gram_stack,
    kappa,
    pseudo_dimension_bound,
)

__all__ = [
    "CombinationWeights",
    "KernelFamily",
    "KernelSpec",
    "combine",
    "combined_kernel",
    "cross_gram",
    "family_from_dict",
    "gram_matrix",
    "gram_stack",
    "kappa",
    "pseudo_dimension_bound",
]
