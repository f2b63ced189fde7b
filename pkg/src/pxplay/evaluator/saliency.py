"""Input-gradient saliency maps, clipped and rescaled to [0, 256]."""

import math

import numpy as np

from ..errors import ArgumentError
from ..models import backward, forward

CLIP = math.exp(-9.0)
F32 = np.float32


def saliency(spec, params, stack: np.ndarray, class_id: int) -> np.ndarray:
    """Gradient of the chosen class's pre-softmax logit w.r.t. every input
    pixel and channel, per frame.

    Values are clipped to +-exp(-9) and affinely rescaled so that interval
    maps onto [0, 256]: zero gradient lands exactly on 128, the clip
    endpoints on 0 and 256. Output shape (F, H, W, 3), float32, in color.
    """
    if not 0 <= class_id < spec.class_count:
        raise ArgumentError(f"class {class_id} outside [0, {spec.class_count})")
    logits, cache = forward(spec, params, stack, mode="infer", want_cache=True)
    onehot = np.zeros(spec.class_count, dtype=F32)
    onehot[class_id] = 1.0
    _, d_stack = backward(spec, params, cache, onehot)
    clipped = np.clip(d_stack, -CLIP, CLIP)
    return ((clipped + CLIP) / (2.0 * CLIP) * 256.0).astype(F32)


def predicted_class(spec, params, stack: np.ndarray) -> int:
    logits = forward(spec, params, stack, mode="infer")
    return int(np.argmax(logits))
