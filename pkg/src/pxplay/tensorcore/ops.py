"""Forward and backward definitions for every layer kind in the network stack.

Conventions:
  - images are channels-last: (H, W, C) or (B, H, W, C)
  - convolution kernels are (K, K, C_in, F), cross-correlation (no flip)
  - everything is float32; backward functions take the upstream gradient plus
    whatever the forward needed, and return gradients in argument order
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ArgumentError, DimensionError

F32 = np.float32


def _f32(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=F32)


def _with_batch(x: np.ndarray, single_ndim: int):
    """Return (batched array, had_batch_axis flag)."""
    if x.ndim == single_ndim:
        return x[None], False
    if x.ndim == single_ndim + 1:
        return x, True
    raise DimensionError(
        f"expected {single_ndim}- or {single_ndim + 1}-dim input, got shape {x.shape}"
    )


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------

def conv_output_extent(extent: int, kernel: int, stride: int, pad: int) -> int:
    """floor((extent + 2*pad - kernel) / stride) + 1"""
    return (extent + 2 * pad - kernel) // stride + 1


def _conv_cols(xp: np.ndarray, k: int, stride: int, oh: int, ow: int) -> np.ndarray:
    """im2col on a padded batch (B, Hp, Wp, C) -> (B*oh*ow, k*k*C)."""
    win = sliding_window_view(xp, (k, k), axis=(1, 2))  # (B, oh*, ow*, C, k, k)
    win = win[:, :: stride, :: stride][:, :oh, :ow]
    cols = win.transpose(0, 1, 2, 4, 5, 3)  # (B, oh, ow, k, k, C)
    return cols.reshape(-1, k * k * xp.shape[3])


def conv2d(
    x: np.ndarray,
    kernels: np.ndarray,
    bias: np.ndarray,
    stride: int = 1,
    pad: int = 0,
) -> np.ndarray:
    """2-D cross-correlation with zero padding.

    x: (H, W, C) or (B, H, W, C); kernels: (K, K, C, F); bias: (F,).
    Output spatial extent is floor((H + 2*pad - K)/stride) + 1.
    """
    x = _f32(x)
    kernels = _f32(kernels)
    bias = _f32(bias)
    xb, batched = _with_batch(x, 3)
    if kernels.ndim != 4 or kernels.shape[0] != kernels.shape[1]:
        raise DimensionError(f"kernels must be (K, K, C, F), got {kernels.shape}")
    k, _, cin, f = kernels.shape
    if xb.shape[3] != cin:
        raise DimensionError(
            f"input has {xb.shape[3]} channels but kernels expect {cin}"
        )
    if bias.shape != (f,):
        raise DimensionError(f"bias must be ({f},), got {bias.shape}")
    if stride < 1 or pad < 0:
        raise ArgumentError("stride must be >= 1 and pad >= 0")
    b, h, w, _ = xb.shape
    if h + 2 * pad < k or w + 2 * pad < k:
        raise DimensionError(
            f"padded input {h + 2 * pad}x{w + 2 * pad} smaller than kernel {k}"
        )
    oh = conv_output_extent(h, k, stride, pad)
    ow = conv_output_extent(w, k, stride, pad)
    xp = np.pad(xb, ((0, 0), (pad, pad), (pad, pad), (0, 0))) if pad else xb
    cols = _conv_cols(xp, k, stride, oh, ow)
    out = cols @ kernels.reshape(k * k * cin, f) + bias
    out = out.reshape(b, oh, ow, f)
    return out if batched else out[0]


def conv2d_backward(
    upstream: np.ndarray,
    x: np.ndarray,
    kernels: np.ndarray,
    stride: int = 1,
    pad: int = 0,
):
    """Gradients of conv2d: returns (d_input, d_kernels, d_bias)."""
    x = _f32(x)
    kernels = _f32(kernels)
    upstream = _f32(upstream)
    xb, batched = _with_batch(x, 3)
    ub, ubatched = _with_batch(upstream, 3)
    if batched != ubatched:
        raise DimensionError("upstream and input batch axes disagree")
    k, _, cin, f = kernels.shape
    b, h, w, _ = xb.shape
    oh = conv_output_extent(h, k, stride, pad)
    ow = conv_output_extent(w, k, stride, pad)
    if ub.shape != (b, oh, ow, f):
        raise DimensionError(
            f"upstream shape {ub.shape} != forward output {(b, oh, ow, f)}"
        )
    xp = np.pad(xb, ((0, 0), (pad, pad), (pad, pad), (0, 0))) if pad else xb

    up_flat = ub.reshape(-1, f)
    d_bias = up_flat.sum(axis=0)
    cols = _conv_cols(xp, k, stride, oh, ow)
    d_kernels = (cols.T @ up_flat).reshape(k, k, cin, f)

    d_cols = up_flat @ kernels.reshape(k * k * cin, f).T
    d_cols = d_cols.reshape(b, oh, ow, k, k, cin)
    d_xp = np.zeros_like(xp)
    for ki in range(k):
        for kj in range(k):
            d_xp[:, ki : ki + stride * oh : stride, kj : kj + stride * ow : stride] += (
                d_cols[:, :, :, ki, kj, :]
            )
    d_x = d_xp[:, pad : pad + h, pad : pad + w] if pad else d_xp
    if not batched:
        d_x = d_x[0]
    return d_x, d_kernels, d_bias


# ---------------------------------------------------------------------------
# elementwise / normalization
# ---------------------------------------------------------------------------

def relu(x: np.ndarray) -> np.ndarray:
    """Elementwise max(x, 0)."""
    return np.maximum(_f32(x), F32(0.0))


def relu_backward(upstream: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Pass gradient where x > 0; subgradient at exactly 0 is 0."""
    return np.where(x > 0, _f32(upstream), F32(0.0))


@dataclass(frozen=True)
class LrnSpec:
    """Cross-channel response normalization constants.

    out_c = x_c / (k + alpha * sum_{j in window(c)} x_j^2) ** beta,
    the window centered on c and clipped at channel boundaries.
    """

    k: float = 2.0
    alpha: float = 1e-4
    beta: float = 0.75
    window: int = 5

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ArgumentError(f"window must be odd and >= 1, got {self.window}")
        if self.k <= 0:
            raise ArgumentError("k must be > 0")
        if self.alpha < 0 or self.beta < 0:
            raise ArgumentError("alpha and beta must be >= 0")


def _window_sum(x: np.ndarray, window: int) -> np.ndarray:
    """Sliding sum over the last (channel) axis, clipped at the edges."""
    half = window // 2
    pad = [(0, 0)] * (x.ndim - 1) + [(half, half)]
    xp = np.pad(x, pad)
    out = np.zeros_like(x)
    c = x.shape[-1]
    for off in range(window):
        out += xp[..., off : off + c]
    return out


def lrn(x: np.ndarray, spec: LrnSpec) -> np.ndarray:
    """Local response normalization across channels (channels-last)."""
    x = _f32(x)
    denom = F32(spec.k) + F32(spec.alpha) * _window_sum(x * x, spec.window)
    return x * denom ** F32(-spec.beta)


def lrn_backward(upstream: np.ndarray, x: np.ndarray, spec: LrnSpec) -> np.ndarray:
    x = _f32(x)
    upstream = _f32(upstream)
    denom = F32(spec.k) + F32(spec.alpha) * _window_sum(x * x, spec.window)
    # d out_c / d x_i = delta_ci * denom_c^-beta
    #                   - 2 alpha beta x_c denom_c^(-beta-1) x_i  (i in window(c))
    t = upstream * x * denom ** F32(-spec.beta - 1)
    return upstream * denom ** F32(-spec.beta) - F32(2 * spec.alpha * spec.beta) * x * _window_sum(
        t, spec.window
    )


# ---------------------------------------------------------------------------
# pooling
# ---------------------------------------------------------------------------

def maxpool(x: np.ndarray, size: int, stride: int) -> np.ndarray:
    """Max pooling over size x size windows; output floor((H-size)/stride)+1."""
    x = _f32(x)
    xb, batched = _with_batch(x, 3)
    b, h, w, c = xb.shape
    if size > h or size > w:
        raise DimensionError(f"pool size {size} exceeds spatial extent {h}x{w}")
    oh = (h - size) // stride + 1
    ow = (w - size) // stride + 1
    out = np.full((b, oh, ow, c), -np.inf, dtype=F32)
    for i in range(size):
        for j in range(size):
            np.maximum(
                out,
                xb[:, i : i + stride * oh : stride, j : j + stride * ow : stride],
                out=out,
            )
    return out if batched else out[0]


def maxpool_backward(
    upstream: np.ndarray, x: np.ndarray, size: int, stride: int
) -> np.ndarray:
    """Route gradient to each window's argmax; ties go to the lowest flat index."""
    x = _f32(x)
    upstream = _f32(upstream)
    xb, batched = _with_batch(x, 3)
    ub, _ = _with_batch(upstream, 3)
    b, h, w, c = xb.shape
    oh = (h - size) // stride + 1
    ow = (w - size) // stride + 1
    if ub.shape != (b, oh, ow, c):
        raise DimensionError(
            f"upstream shape {ub.shape} != pooled shape {(b, oh, ow, c)}"
        )
    outmax = maxpool(xb, size, stride)
    d_x = np.zeros_like(xb)
    taken = np.zeros((b, oh, ow, c), dtype=bool)
    for i in range(size):
        for j in range(size):
            vals = xb[:, i : i + stride * oh : stride, j : j + stride * ow : stride]
            hit = (vals == outmax) & ~taken
            d_x[:, i : i + stride * oh : stride, j : j + stride * ow : stride] += (
                ub * hit
            )
            taken |= hit
    return d_x if batched else d_x[0]


# ---------------------------------------------------------------------------
# dense / dropout
# ---------------------------------------------------------------------------

def dense(x: np.ndarray, weights: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Fully connected layer: x @ W + b for x of shape (N,) or (B, N)."""
    x = _f32(x)
    weights = _f32(weights)
    bias = _f32(bias)
    if weights.ndim != 2:
        raise DimensionError(f"weights must be 2-D, got {weights.shape}")
    n, m = weights.shape
    if x.shape[-1] != n:
        raise DimensionError(f"input length {x.shape[-1]} != weight rows {n}")
    if bias.shape != (m,):
        raise DimensionError(f"bias must be ({m},), got {bias.shape}")
    return x @ weights + bias


def dense_backward(upstream: np.ndarray, x: np.ndarray, weights: np.ndarray):
    """Returns (d_input, d_weights, d_bias)."""
    x = _f32(x)
    upstream = _f32(upstream)
    weights = _f32(weights)
    if x.ndim == 1:
        d_w = np.outer(x, upstream)
        d_b = upstream.copy()
    else:
        d_w = x.T @ upstream
        d_b = upstream.sum(axis=0)
    d_x = upstream @ weights.T
    return d_x, d_w, d_b


def dropout(x: np.ndarray, p: float, mode: str, rng: np.random.Generator | None = None):
    """Inverted dropout. Returns (output, mask); mask is None in infer mode.

    Train mode zeroes each element with probability p and scales survivors by
    1/(1-p); infer mode is the exact identity (the same array passes through).
    """
    if not 0 <= p < 1:
        raise ArgumentError(f"dropout rate must be in [0, 1), got {p}")
    if mode == "infer":
        return x, None
    if mode != "train":
        raise ArgumentError(f"mode must be 'train' or 'infer', got {mode!r}")
    if rng is None:
        raise ArgumentError("train-mode dropout requires an rng")
    x = _f32(x)
    mask = rng.random(x.shape, dtype=F32) >= p
    return x * mask * F32(1.0 / (1.0 - p)), mask


def dropout_backward(upstream: np.ndarray, mask, p: float) -> np.ndarray:
    if mask is None:
        return upstream
    return _f32(upstream) * mask * F32(1.0 / (1.0 - p))


# ---------------------------------------------------------------------------
# softmax / loss
# ---------------------------------------------------------------------------

def softmax(logits: np.ndarray) -> np.ndarray:
    """Shift-stable softmax over the last axis."""
    z = _f32(logits)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_cross_entropy(logits: np.ndarray, label):
    """Softmax + negative log likelihood.

    Single sample: logits (C,), label int -> (loss float, probs (C,), grad (C,)).
    Batched: logits (B, C), label (B,) ints -> (loss (B,), probs, grad) where
    grad is per-sample (not averaged).

    probs and grad are float32; the loss is accumulated in float64 so that
    finite-difference checks are not dominated by reduction roundoff.
    """
    z = _f32(logits)
    if z.ndim == 1:
        loss, probs, grad = softmax_cross_entropy(z[None], np.asarray([label]))
        return float(loss[0]), probs[0], grad[0]
    if z.ndim != 2:
        raise DimensionError(f"logits must be 1- or 2-D, got shape {z.shape}")
    labels = np.asarray(label)
    b, c = z.shape
    if labels.shape != (b,):
        raise DimensionError(f"labels must be ({b},), got {labels.shape}")
    if labels.min() < 0 or labels.max() >= c:
        raise ArgumentError(f"label out of range [0, {c})")
    shifted = (z - z.max(axis=1, keepdims=True)).astype(np.float64)
    e = np.exp(shifted)
    total = e.sum(axis=1, keepdims=True)
    probs = (e / total).astype(F32)
    rows = np.arange(b)
    loss = np.log(total[:, 0]) - shifted[rows, labels]
    grad = probs.copy()
    grad[rows, labels] -= F32(1.0)
    return loss, probs, grad
