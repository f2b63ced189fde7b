"""Per-class score multipliers that equalize false-positive rates."""

from dataclasses import dataclass

import numpy as np

from ..errors import ArgumentError, DimensionError

B_MIN = 0.01


@dataclass
class BiasVector:
    """Multipliers in [B_MIN, 1] applied to softmax scores at inference."""

    b: np.ndarray
    provenance: str = "computed"  # computed | manual-override
    degenerate: bool = False

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=np.float64)
        if not np.all(np.isfinite(self.b)):
            raise ArgumentError("bias entries must be finite")
        if self.b.min() < B_MIN - 1e-12 or self.b.max() > 1.0 + 1e-12:
            raise ArgumentError(f"bias entries must lie in [{B_MIN}, 1]")

    @classmethod
    def ones(cls, class_count: int, **kwargs):
        return cls(b=np.ones(class_count), **kwargs)

    def to_named_dict(self, class_names) -> dict:
        return {name: float(v) for name, v in zip(class_names, self.b)}

    @classmethod
    def from_named_dict(cls, d: dict, class_names, provenance="manual-override"):
        return cls(b=np.array([d[name] for name in class_names]), provenance=provenance)


def false_positive_counts(scores: np.ndarray, labels: np.ndarray,
                          b: np.ndarray) -> np.ndarray:
    """FP_c = biased-argmax predictions of class c whose true label differs."""
    preds = np.argmax(scores * b, axis=1)
    c = scores.shape[1]
    fp = np.zeros(c, dtype=np.int64)
    wrong = preds != labels
    np.add.at(fp, preds[wrong], 1)
    return fp


def compute_bias(scores: np.ndarray, labels: np.ndarray, rounds: int = 10,
                 b_min: float = B_MIN, stop_ratio: float = 2.0) -> BiasVector:
    """Iterative proportional FPR equalization on validation scores.

    Starting from b = 1, each round recomputes per-class false-positive
    counts under the biased argmax and damps each multiplier toward the
    median count: b_c *= min(1, sqrt(median / max(FP_c, 1))), clamped to
    [b_min, 1] and renormalized so max(b) = 1. Factors are capped at 1
    (suppress-only) because allowing recovery makes the fixed point
    oscillate; relative recovery still happens through the renormalization.
    Rounds stop early once the max/min false-positive-rate ratio falls below
    stop_ratio. Deterministic.

    If the biased predictions still collapse to a single class after the
    rounds, returns all-ones with the degenerate flag set.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 2 or len(scores) != len(labels):
        raise DimensionError("scores must be (N, C) with N labels")
    c = scores.shape[1]
    b = np.ones(c)
    for _ in range(rounds):
        if fpr_ratio(scores, labels, b) < stop_ratio:
            break
        fp = false_positive_counts(scores, labels, b)
        med = float(np.median(fp))
        factor = np.minimum(1.0, np.sqrt(max(med, 0.0) / np.maximum(fp, 1)))
        b = np.clip(b * factor, b_min, 1.0)
        b = b / b.max()
    final_preds = np.argmax(scores * b, axis=1)
    if len(np.unique(final_preds)) <= 1:
        return BiasVector.ones(c, degenerate=True)
    return BiasVector(b=b)


def fpr_ratio(scores: np.ndarray, labels: np.ndarray, b: np.ndarray) -> float:
    """max/min per-class false-positive RATE (rate over negatives of that
    class); classes that are never a negative are ignored."""
    labels = np.asarray(labels)
    fp = false_positive_counts(scores, np.asarray(labels), np.asarray(b))
    n = len(labels)
    negatives = np.array([n - int((labels == k).sum()) for k in range(scores.shape[1])])
    valid = negatives > 0
    rates = fp[valid] / negatives[valid]
    positive = rates[rates > 0]
    if positive.size == 0:
        return 1.0
    return float(positive.max() / positive.min())
