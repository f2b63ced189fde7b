"""Training loop, batch sampling, and learning-rate schedule."""

from .loop import (
    BatchSampler,
    TrainConfig,
    TrainLog,
    TrainResult,
    evaluate_topn,
    lr_at,
    top_n_hits,
    train,
)

__all__ = [
    "BatchSampler",
    "TrainConfig",
    "TrainLog",
    "TrainResult",
    "evaluate_topn",
    "lr_at",
    "top_n_hits",
    "train",
]
