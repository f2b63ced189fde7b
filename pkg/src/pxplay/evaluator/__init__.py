"""Measurement suite: accuracies, confusion, match series, saliency, reports."""

from .metrics import ConfusionMatrix, collect_logits, collect_scores, confusion, top_n_accuracy
from .report import export_report, read_pgm, read_ppm, write_pgm, write_ppm
from .saliency import CLIP, predicted_class, saliency
from .series import MatchSeries, mean_and_halfwidth, run_series

__all__ = [
    "ConfusionMatrix",
    "collect_logits",
    "collect_scores",
    "confusion",
    "top_n_accuracy",
    "export_report",
    "read_pgm",
    "read_ppm",
    "write_pgm",
    "write_ppm",
    "CLIP",
    "predicted_class",
    "saliency",
    "MatchSeries",
    "mean_and_halfwidth",
    "run_series",
]
