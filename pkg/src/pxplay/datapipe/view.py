"""Materialized view of a dataset: cached downsampled episodes + stack access."""

import numpy as np

from ..errors import ArgumentError
from .manifest import DatasetManifest
from .preprocess import CachedEpisode, StackSpec, load_mean_image


class DatasetView:
    """Loads a manifest's episodes once (downsampled, u8) and assembles
    float32 mean-subtracted stacks on demand. Shared by training and
    evaluation so both see byte-identical inputs."""

    def __init__(self, manifest: DatasetManifest, frame_count: int | None = None):
        self.manifest = manifest
        self.mean = load_mean_image(manifest.mean_path)
        offsets = tuple(manifest.stack_offsets)
        if frame_count is not None:
            if frame_count > len(offsets):
                raise ArgumentError(
                    f"model wants {frame_count} frames, manifest offers {len(offsets)}"
                )
            offsets = offsets[:frame_count]
        self.stack_spec = StackSpec(offsets)
        self._episodes = {}

    def episodes(self, role: str):
        if role not in self._episodes:
            h, w = self.manifest.resolution
            self._episodes[role] = [
                CachedEpisode(p, h, w) for p in self.manifest.episode_paths(role)
            ]
        return self._episodes[role]

    def samples(self, role: str):
        """Every labeled tick is a sample center: [(episode_idx, tick), ...]."""
        out = []
        for ei, ep in enumerate(self.episodes(role)):
            out.extend((ei, t) for t in range(ep.frame_count))
        return out

    def batch(self, role: str, sample_ids):
        """(stacks (B, F, H, W, 3) float32, labels (B,) int64)."""
        eps = self.episodes(role)
        stacks = np.stack(
            [eps[ei].stack(t, self.stack_spec, self.mean) for ei, t in sample_ids]
        )
        labels = np.asarray([eps[ei].labels[t] for ei, t in sample_ids], dtype=np.int64)
        return stacks, labels
