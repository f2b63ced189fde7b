"""Dataset manifest: class table, episode roles, preprocessing references."""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..arena import ACTION_NAMES
from ..errors import ArgumentError, FormatError
from .episode import load_labels
from .preprocess import file_sha256


@dataclass
class DatasetManifest:
    base_dir: Path
    classes: list  # [(id, name)]
    resolution: tuple  # (h, w) model input
    stack_offsets: tuple
    mean_image_path: str
    mean_image_sha256: str
    episodes: list  # [{"path": str, "role": "train"|"val", "frames": int}]
    bias: dict | None = None  # class name -> multiplier, optional

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def episode_paths(self, role: str | None = None):
        return [
            self.base_dir / e["path"]
            for e in self.episodes
            if role is None or e["role"] == role
        ]

    @property
    def mean_path(self) -> Path:
        return self.base_dir / self.mean_image_path

    def to_json_dict(self) -> dict:
        d = {
            "classes": [{"id": i, "name": n} for i, n in self.classes],
            "resolution": list(self.resolution),
            "stack_offsets": list(self.stack_offsets),
            "mean_image": {"path": self.mean_image_path,
                           "sha256": self.mean_image_sha256},
            "episodes": self.episodes,
        }
        if self.bias is not None:
            d["bias"] = self.bias
        return d


def default_classes():
    return list(enumerate(ACTION_NAMES))


def save_manifest(path, manifest: DatasetManifest) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest is not valid JSON: {exc}") from exc
    try:
        classes = [(int(c["id"]), str(c["name"])) for c in raw["classes"]]
        manifest = DatasetManifest(
            base_dir=path.parent,
            classes=classes,
            resolution=tuple(raw["resolution"]),
            stack_offsets=tuple(raw["stack_offsets"]),
            mean_image_path=raw["mean_image"]["path"],
            mean_image_sha256=raw["mean_image"]["sha256"],
            episodes=list(raw["episodes"]),
            bias=raw.get("bias"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"manifest missing or malformed field: {exc}") from exc
    validate_manifest(manifest)
    return manifest


def validate_manifest(manifest: DatasetManifest) -> None:
    if [i for i, _ in manifest.classes] != list(range(manifest.class_count)):
        raise FormatError("class ids must be dense starting at 0")
    roles = {e["role"] for e in manifest.episodes}
    if not roles <= {"train", "val"}:
        raise FormatError(f"unknown episode role in {roles}")
    seen = set()
    for e in manifest.episodes:
        if e["path"] in seen:
            raise FormatError(f"episode {e['path']} listed twice")
        seen.add(e["path"])
        if not (manifest.base_dir / e["path"]).exists():
            raise FormatError(f"episode file missing: {e['path']}")
    if not manifest.mean_path.exists():
        raise FormatError(f"mean image missing: {manifest.mean_image_path}")
    actual = file_sha256(manifest.mean_path)
    if actual != manifest.mean_image_sha256:
        raise FormatError("mean image hash mismatch")


def split_by_episode(episode_names: list, val_fraction: float, seed: int) -> dict:
    """Whole-episode train/val assignment; the split is by episode, never by
    frame, so validation stays uncorrelated with training."""
    if len(episode_names) < 2:
        raise ArgumentError("need at least 2 episodes to split")
    rng = np.random.default_rng(seed)
    order = list(rng.permutation(len(episode_names)))
    n_val = int(round(len(episode_names) * val_fraction))
    n_val = max(1, min(len(episode_names) - 1, n_val))
    val_idx = set(order[:n_val])
    return {
        name: ("val" if i in val_idx else "train")
        for i, name in enumerate(episode_names)
    }


def class_histogram(manifest: DatasetManifest, role: str | None = None):
    """Exact label counts per class plus frequencies for the chosen role."""
    counts = np.zeros(manifest.class_count, dtype=np.int64)
    for path in manifest.episode_paths(role):
        labels = load_labels(path)
        if labels.size and labels.max() >= manifest.class_count:
            raise FormatError(f"label out of range in {path}")
        counts += np.bincount(labels, minlength=manifest.class_count)
    total = counts.sum()
    freqs = counts / total if total else np.zeros_like(counts, dtype=np.float64)
    return counts, freqs
