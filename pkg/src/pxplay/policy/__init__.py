"""Inference-time rebalancing and the frame-buffer agent."""

from .agent import AgentConfig, AgentPolicy, FrameBuffer, act, sampling_distribution, select_action
from .bias import B_MIN, BiasVector, compute_bias, false_positive_counts, fpr_ratio

__all__ = [
    "AgentConfig",
    "AgentPolicy",
    "FrameBuffer",
    "act",
    "sampling_distribution",
    "select_action",
    "B_MIN",
    "BiasVector",
    "compute_bias",
    "false_positive_counts",
    "fpr_ratio",
]
