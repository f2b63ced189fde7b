"""Episode recording, preprocessing, dataset manifests, and stack assembly."""

from .episode import Episode, load_episode, load_labels, write_episode
from .manifest import (
    DatasetManifest,
    class_histogram,
    default_classes,
    load_manifest,
    save_manifest,
    split_by_episode,
    validate_manifest,
)
from .preprocess import (
    CachedEpisode,
    StackSpec,
    compute_mean_image,
    downsample_nn,
    file_sha256,
    load_mean_image,
    make_stack,
    save_mean_image,
)
from .record import record_episode

__all__ = [
    "Episode",
    "load_episode",
    "load_labels",
    "write_episode",
    "DatasetManifest",
    "class_histogram",
    "default_classes",
    "load_manifest",
    "save_manifest",
    "split_by_episode",
    "validate_manifest",
    "CachedEpisode",
    "StackSpec",
    "compute_mean_image",
    "downsample_nn",
    "file_sha256",
    "load_mean_image",
    "make_stack",
    "save_mean_image",
    "record_episode",
]
