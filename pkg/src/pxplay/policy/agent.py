"""Inference-time action selection and the live frame-buffer agent."""

from dataclasses import dataclass, field

import numpy as np

from ..arena import ArenaConstants, DEFAULTS, render
from ..datapipe import StackSpec, downsample_nn
from ..errors import ArgumentError, StateError
from ..models import forward
from ..tensorcore import softmax
from .bias import BiasVector


@dataclass
class AgentConfig:
    class_count: int
    top_k: int = 3
    bias: BiasVector | None = None
    stack_spec: StackSpec = field(default_factory=StackSpec)

    def __post_init__(self):
        if not 1 <= self.top_k <= self.class_count:
            raise ArgumentError("top_k must be in [1, class_count]")
        if self.bias is None:
            self.bias = BiasVector.ones(self.class_count)
        if len(self.bias.b) != self.class_count:
            raise ArgumentError("bias length != class_count")


def select_action(scores: np.ndarray, config: AgentConfig,
                  rng: np.random.Generator) -> int:
    """Bias the scores, keep the top_k (ties to lower ids), renormalize,
    sample."""
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise ArgumentError("scores must be finite")
    if abs(scores.sum() - 1.0) > 1e-5:
        raise ArgumentError("scores must sum to 1")
    biased = scores * config.bias.b
    order = np.argsort(-biased, kind="stable")  # stable keeps lower ids first
    top = order[: config.top_k]
    weights = biased[top]
    total = weights.sum()
    if total <= 0:
        return int(top[0])
    probs = weights / total
    u = rng.random()
    return int(top[np.searchsorted(np.cumsum(probs), u, side="right").clip(0, len(top) - 1)])


def sampling_distribution(scores: np.ndarray, config: AgentConfig) -> np.ndarray:
    """The exact categorical distribution select_action draws from."""
    biased = np.asarray(scores, dtype=np.float64) * config.bias.b
    order = np.argsort(-biased, kind="stable")[: config.top_k]
    out = np.zeros_like(biased)
    total = biased[order].sum()
    if total > 0:
        out[order] = biased[order] / total
    else:
        out[order[0]] = 1.0
    return out


class FrameBuffer:
    """Ring of the last preprocessed frames, addressed by tick offsets."""

    def __init__(self, capacity: int = 16):
        self.capacity = capacity
        self.frames = []
        self.ticks = []

    def push(self, frame: np.ndarray, tick: int) -> None:
        if self.ticks and tick <= self.ticks[-1]:
            raise ArgumentError("ticks must be strictly increasing")
        self.frames.append(frame)
        self.ticks.append(tick)
        if len(self.frames) > self.capacity:
            self.frames.pop(0)
            self.ticks.pop(0)

    def __len__(self):
        return len(self.frames)

    def stack(self, spec: StackSpec) -> np.ndarray:
        """Assemble (F, H, W, 3); offsets older than the buffer clamp to its
        oldest frame (the live analog of episode-start clamping)."""
        if not self.frames:
            raise StateError("frame buffer is empty")
        now = self.ticks[-1]
        slots = []
        for off in spec.offsets:
            target = now + off
            # newest index whose tick <= target, clamped to the oldest
            idx = 0
            for i in range(len(self.ticks) - 1, -1, -1):
                if self.ticks[i] <= target:
                    idx = i
                    break
            slots.append(self.frames[idx])
        return np.stack(slots)


def act(spec, params, buffer: FrameBuffer, config: AgentConfig,
        rng: np.random.Generator):
    """One inference step: stack from the buffer, forward, bias+top-k sample.

    Returns (action id, raw softmax scores for display).
    """
    stack = buffer.stack(config.stack_spec)[: spec.frame_count]
    logits = forward(spec, params, stack, mode="infer")
    scores = softmax(logits)
    action = select_action(scores, config, rng)
    return action, scores


class AgentPolicy:
    """Arena policy driven by a trained model: render, preprocess, act.

    Mirrors the recording pipeline exactly: native render, nearest-neighbor
    downsample to the model resolution, mean subtraction, frame stacking.
    """

    def __init__(self, player: int, spec, params, mean_image: np.ndarray,
                 config: AgentConfig, seed: int, c: ArenaConstants = DEFAULTS):
        self.player = player
        self.spec = spec
        self.params = params
        self.mean = mean_image
        self.config = config
        self.rng = np.random.default_rng(seed)
        self.c = c
        self.buffer = FrameBuffer(capacity=config.stack_spec.span + 1)
        self.last_scores = None
        if player != 0:
            raise ArgumentError("AgentPolicy drives player 1 (index 0) only")

    def __call__(self, state) -> int:
        frame = render(state, c=self.c)
        h, w = self.mean.shape[:2]
        pre = downsample_nn(frame, h, w).astype(np.float32) - self.mean
        self.buffer.push(pre, state.tick)
        action, scores = act(self.spec, self.params, self.buffer, self.config, self.rng)
        self.last_scores = scores
        return action
