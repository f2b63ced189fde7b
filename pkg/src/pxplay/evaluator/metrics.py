"""Validation metrics: top-N accuracy and confusion matrices."""

from dataclasses import dataclass

import numpy as np

from ..datapipe import DatasetManifest
from ..datapipe.view import DatasetView
from ..models import forward
from ..tensorcore import softmax
from ..trainer import top_n_hits


@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # (C, C), rows = true class, cols = predicted
    priors: np.ndarray  # per-class label frequency

    def normalized(self) -> np.ndarray:
        """Rows rescaled by label frequency; nonempty rows sum to 1."""
        sums = self.counts.sum(axis=1, keepdims=True)
        out = np.zeros_like(self.counts, dtype=np.float64)
        np.divide(self.counts, sums, out=out, where=sums > 0)
        return out


def collect_logits(spec, params, manifest: DatasetManifest, role: str = "val",
                   batch_size: int = 64, view: DatasetView | None = None):
    """(raw logits (N, C), labels (N,)) over a whole split, infer mode."""
    view = view or DatasetView(manifest, frame_count=spec.frame_count)
    samples = view.samples(role)
    all_logits, all_labels = [], []
    for start in range(0, len(samples), batch_size):
        chunk = samples[start : start + batch_size]
        stacks, labels = view.batch(role, chunk)
        all_logits.append(forward(spec, params, stacks, mode="infer"))
        all_labels.append(labels)
    return np.concatenate(all_logits), np.concatenate(all_labels)


def collect_scores(spec, params, manifest: DatasetManifest, role: str = "val",
                   batch_size: int = 64, view: DatasetView | None = None):
    """(softmax scores (N, C), labels (N,)): the inputs bias tuning works on."""
    logits, labels = collect_logits(spec, params, manifest, role, batch_size, view)
    return softmax(logits), labels


def top_n_accuracy(spec, params, manifest: DatasetManifest, n: int,
                   role: str = "val", view: DatasetView | None = None) -> float:
    """Fraction of samples whose true class ranks in the n highest logits.

    Ranks raw logits (ties to the lower class id), so the result is invariant
    under any positive monotone transform of the logits.
    """
    logits, labels = collect_logits(spec, params, manifest, role, view=view)
    return float(top_n_hits(logits, labels, n).mean())


def confusion(spec, params, manifest: DatasetManifest, role: str = "val",
              view: DatasetView | None = None) -> ConfusionMatrix:
    logits, labels = collect_logits(spec, params, manifest, role, view=view)
    c = logits.shape[1]
    preds = np.argmax(logits, axis=1)
    counts = np.zeros((c, c), dtype=np.int64)
    np.add.at(counts, (labels, preds), 1)
    priors = np.bincount(labels, minlength=c) / max(1, len(labels))
    return ConfusionMatrix(counts=counts, priors=priors)
