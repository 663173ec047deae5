"""Multiple-kernel margin learning."""

from .mkl import (
    MklModel,
    TrainOptions,
    decision_function,
    empirical_margin_error,
    estimation_error,
    predict,
    train,
    true_error_exact,
    zero_model,
)

__all__ = [
    "MklModel",
    "TrainOptions",
    "decision_function",
    "empirical_margin_error",
    "estimation_error",
    "predict",
    "train",
    "true_error_exact",
    "zero_model",
]
