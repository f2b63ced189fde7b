"""Dense float32 tensor ops: layer forwards/backwards, loss, Adam, gradient checking.

Tensors are plain ``numpy.ndarray`` objects with ``dtype=float32``. Every
operation accepts the documented single-sample shape or the same shape with a
leading batch axis, and returns arrays of the same convention.
"""

from .ops import (
    LrnSpec,
    conv2d,
    conv2d_backward,
    dense,
    dense_backward,
    dropout,
    dropout_backward,
    lrn,
    lrn_backward,
    maxpool,
    maxpool_backward,
    relu,
    relu_backward,
    softmax,
    softmax_cross_entropy,
)
from .adam import AdamState, adam_step
from .gradcheck import GradCheckReport, finite_diff_check

__all__ = [
    "LrnSpec",
    "conv2d",
    "conv2d_backward",
    "relu",
    "relu_backward",
    "lrn",
    "lrn_backward",
    "maxpool",
    "maxpool_backward",
    "dense",
    "dense_backward",
    "dropout",
    "dropout_backward",
    "softmax",
    "softmax_cross_entropy",
    "AdamState",
    "adam_step",
    "GradCheckReport",
    "finite_diff_check",
]
