"""Forward evaluation and reverse-mode gradients for a whole architecture."""

import numpy as np

from ..errors import ArgumentError, DimensionError
from ..tensorcore import (
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
)
from .arch import ArchitectureSpec

F32 = np.float32


def _tower_forward(spec, params, ns, x, caches):
    steps = []
    for li, layer in enumerate(spec.tower):
        if layer.kind == "conv":
            steps.append(x)
            x = conv2d(x, params[f"{ns}.{li}.w"], params[f"{ns}.{li}.b"], layer.stride, layer.pad)
        elif layer.kind == "relu":
            steps.append(x)
            x = relu(x)
        elif layer.kind == "lrn":
            steps.append(x)
            x = lrn(x, layer.lrn)
        elif layer.kind == "pool":
            steps.append(x)
            x = maxpool(x, layer.kernel, layer.stride)
    if caches is not None:
        caches[ns] = steps
    return x


def _tower_backward(spec, params, ns, steps, d_out, grads):
    d = d_out
    for li in range(len(spec.tower) - 1, -1, -1):
        layer = spec.tower[li]
        x_in = steps[li]
        if layer.kind == "conv":
            d, dw, db = conv2d_backward(d, x_in, params[f"{ns}.{li}.w"], layer.stride, layer.pad)
            grads[f"{ns}.{li}.w"] = dw
            grads[f"{ns}.{li}.b"] = db
        elif layer.kind == "relu":
            d = relu_backward(d, x_in)
        elif layer.kind == "lrn":
            d = lrn_backward(d, x_in, layer.lrn)
        elif layer.kind == "pool":
            d = maxpool_backward(d, x_in, layer.kernel, layer.stride)
    return d


def forward(
    spec: ArchitectureSpec,
    params: dict,
    stack: np.ndarray,
    mode: str = "infer",
    rng: np.random.Generator | None = None,
    want_cache: bool = False,
):
    """Frame stack -> class logits.

    stack is (F, H, W, 3) or (B, F, H, W, 3), already preprocessed
    (downsampled and mean-subtracted). Infer mode is deterministic; train mode
    needs an rng for dropout. With want_cache=True returns (logits, cache) for
    a later backward().
    """
    if mode not in ("train", "infer"):
        raise ArgumentError(f"mode must be 'train' or 'infer', got {mode!r}")
    x = np.asarray(stack, dtype=F32)
    batched = x.ndim == 5
    if not batched:
        if x.ndim != 4:
            raise DimensionError(f"stack must be 4- or 5-dim, got shape {x.shape}")
        x = x[None]
    h, w = spec.input_hw
    if x.shape[1:] != (spec.frame_count, h, w, 3):
        raise DimensionError(
            f"stack shape {x.shape[1:]} != ({spec.frame_count}, {h}, {w}, 3)"
        )
    b = x.shape[0]

    caches = {} if want_cache else None
    if spec.variant == "early_integration":
        merged = x.transpose(0, 2, 3, 1, 4).reshape(b, h, w, 3 * spec.frame_count)
        tower_inputs = [("tower", merged)]
    elif spec.variant == "late_integration":
        tower_inputs = [(f"tower{f}", x[:, f]) for f in range(spec.frame_count)]
    else:
        tower_inputs = [("tower", x[:, 0])]

    flats = []
    for ns, tin in tower_inputs:
        out = _tower_forward(spec, params, ns, tin, caches)
        flats.append(out.reshape(b, -1))
    y = flats[0] if len(flats) == 1 else np.concatenate(flats, axis=1)

    head_steps = []
    for li, layer in enumerate(spec.head):
        if layer.kind == "fc":
            head_steps.append(y)
            y = dense(y, params[f"head.{li}.w"], params[f"head.{li}.b"])
        elif layer.kind == "dropout":
            y, mask = dropout(y, layer.p, mode, rng)
            head_steps.append(mask)
        elif layer.kind == "relu":
            head_steps.append(y)
            y = relu(y)
        else:
            raise ArgumentError(f"layer kind {layer.kind!r} not allowed in head")

    logits = y if batched else y[0]
    if not want_cache:
        return logits
    caches["head"] = head_steps
    caches["flats"] = flats
    caches["batched"] = batched
    caches["tower_out_shape"] = _tower_out_shape(spec, b)
    caches["stack_shape"] = (b, spec.frame_count, h, w, 3)
    return logits, caches


def _tower_out_shape(spec, b):
    th, tw, tc = spec.tower_shapes()[-1]
    return (b, th, tw, tc)


def activation_signature(spec: ArchitectureSpec, cache: dict) -> int:
    """CRC of the discrete activation pattern (relu masks, pool argmaxes).

    Two forward passes with the same signature followed the same smooth branch
    of the piecewise-linear network, so finite differences between them are
    meaningful; a changed signature means an activation kink lies in between.
    """
    import zlib

    crc = 0
    for ns in spec.tower_namespaces():
        steps = cache[ns]
        for li, layer in enumerate(spec.tower):
            x_in = steps[li]
            if layer.kind == "relu":
                crc = zlib.crc32(np.packbits(x_in > 0).tobytes(), crc)
            elif layer.kind == "pool":
                crc = zlib.crc32(
                    _pool_argmax_offsets(x_in, layer.kernel, layer.stride).tobytes(), crc
                )
    return crc


def _pool_argmax_offsets(x: np.ndarray, size: int, stride: int) -> np.ndarray:
    """Winning in-window offset (first max, flat order) per pooling window."""
    b, h, w, c = x.shape
    oh = (h - size) // stride + 1
    ow = (w - size) // stride + 1
    best = np.full((b, oh, ow, c), -np.inf, dtype=x.dtype)
    offs = np.zeros((b, oh, ow, c), dtype=np.int8)
    for i in range(size):
        for j in range(size):
            vals = x[:, i : i + stride * oh : stride, j : j + stride * ow : stride]
            better = vals > best
            np.maximum(best, vals, out=best)
            offs[better] = i * size + j
    return offs


def backward(spec: ArchitectureSpec, params: dict, cache: dict, d_logits: np.ndarray):
    """Reverse pass from logit gradients.

    Returns (grads keyed like params, d_stack). d_logits must carry any batch
    averaging already (gradients are summed over the batch).
    """
    d = np.asarray(d_logits, dtype=F32)
    if d.ndim == 1:
        d = d[None]
    grads = {}
    for li in range(len(spec.head) - 1, -1, -1):
        layer = spec.head[li]
        stored = cache["head"][li]
        if layer.kind == "fc":
            d, dw, db = dense_backward(d, stored, params[f"head.{li}.w"])
            grads[f"head.{li}.w"] = dw
            grads[f"head.{li}.b"] = db
        elif layer.kind == "dropout":
            d = dropout_backward(d, stored, layer.p)
        elif layer.kind == "relu":
            d = relu_backward(d, stored)

    b, fh, fw, fc = cache["tower_out_shape"]
    flat = fh * fw * fc
    bshape = cache["stack_shape"]
    d_stack = np.zeros(bshape, dtype=F32)
    namespaces = spec.tower_namespaces()
    h, w = spec.input_hw
    for i, ns in enumerate(namespaces):
        d_flat = d[:, i * flat : (i + 1) * flat].reshape(b, fh, fw, fc)
        d_in = _tower_backward(spec, params, ns, cache[ns], d_flat, grads)
        if spec.variant == "early_integration":
            d_stack = d_in.reshape(b, h, w, spec.frame_count, 3).transpose(0, 3, 1, 2, 4)
        elif spec.variant == "late_integration":
            d_stack[:, i] = d_in
        else:
            d_stack[:, 0] = d_in
    if not cache["batched"]:
        d_stack = d_stack[0]
    return grads, d_stack
