"""Mixed datasets drawn from a pool of chains."""

from .simulate import (
    MODES,
    BatchCounts,
    MixedDataset,
    assign_chains,
    emit_labels,
    generate_features,
    read_dataset_csv,
    sample_path,
    simulate_counts,
    simulate_dataset,
    write_dataset_csv,
)

__all__ = [
    "MODES",
    "BatchCounts",
    "MixedDataset",
    "assign_chains",
    "emit_labels",
    "generate_features",
    "read_dataset_csv",
    "sample_path",
    "simulate_counts",
    "simulate_dataset",
    "write_dataset_csv",
]
