"""Nearest-neighbor downsampling, mean image, and temporal stack assembly."""

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from ..errors import ArgumentError, FormatError
from .episode import Episode, load_episode

F32 = np.float32


def _nn_index(src: int, dst: int) -> np.ndarray:
    idx = ((np.arange(dst) + 0.5) * src / dst).astype(np.int64)
    return np.minimum(idx, src - 1)


def downsample_nn(frame: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Center-aligned nearest-neighbor resize; every output pixel is a copy.

    Output (r, c) takes input (floor((r+0.5)*H/out_h), floor((c+0.5)*W/out_w)).
    """
    if out_h < 1 or out_w < 1:
        raise ArgumentError("output dims must be >= 1")
    h, w = frame.shape[:2]
    rows = _nn_index(h, out_h)
    cols = _nn_index(w, out_w)
    return frame[rows][:, cols]


@dataclass(frozen=True)
class StackSpec:
    """Which past frames form one network input, as tick offsets from now."""

    offsets: tuple = (0, -5, -10, -15)

    def __post_init__(self):
        if not self.offsets or self.offsets[0] != 0:
            raise ArgumentError("offsets must start at 0")
        if list(self.offsets) != sorted(self.offsets, reverse=True):
            raise ArgumentError("offsets must be sorted descending from 0")

    @property
    def frame_count(self) -> int:
        return len(self.offsets)

    @property
    def span(self) -> int:
        return -min(self.offsets)


def compute_mean_image(episode_paths, out_h: int, out_w: int) -> np.ndarray:
    """Mean over every downsampled frame of the given episodes.

    Deterministic summation order: episode list order, then tick order, with a
    float64 accumulator (cast to float32 at the end).
    """
    total = np.zeros((out_h, out_w, 3), dtype=np.float64)
    count = 0
    for path in episode_paths:
        ep = load_episode(path)
        for i in range(ep.frame_count):
            total += downsample_nn(ep.frames[i], out_h, out_w)
            count += 1
    if count == 0:
        raise ArgumentError("mean image needs at least one training frame")
    return (total / count).astype(F32)


def make_stack(episode: Episode, tick: int, spec: StackSpec,
               mean_image: np.ndarray) -> np.ndarray:
    """(F, H, W, 3) float32 stack for the sample centered at tick.

    Offsets reaching before the first frame clamp to frame 0; each slot is
    downsampled to the mean image's resolution, then mean-subtracted.
    """
    if not 0 <= tick < episode.frame_count:
        raise ArgumentError(f"tick {tick} outside episode of {episode.frame_count}")
    out_h, out_w = mean_image.shape[:2]
    slots = []
    for off in spec.offsets:
        src = max(0, tick + off)
        ds = downsample_nn(episode.frames[src], out_h, out_w)
        slots.append(ds.astype(F32) - mean_image)
    return np.stack(slots)


class CachedEpisode:
    """Episode pre-downsampled once so stack assembly is pure indexing.

    Produces exactly the same stacks as make_stack: downsample on u8 frames,
    cast to float32, subtract the mean at assembly time.
    """

    def __init__(self, path, out_h: int, out_w: int):
        ep = load_episode(path)
        self.labels = ep.labels
        self.frame_count = ep.frame_count
        self.frames_ds = np.stack(
            [downsample_nn(ep.frames[i], out_h, out_w) for i in range(ep.frame_count)]
        )

    def stack(self, tick: int, spec: StackSpec, mean_image: np.ndarray) -> np.ndarray:
        idx = np.maximum(0, tick + np.asarray(spec.offsets))
        return self.frames_ds[idx].astype(F32) - mean_image


MEAN_HEADER = struct.Struct("<II")


def save_mean_image(path, mean: np.ndarray) -> None:
    h, w = mean.shape[:2]
    with open(path, "wb") as fh:
        fh.write(MEAN_HEADER.pack(h, w))
        fh.write(np.ascontiguousarray(mean, dtype="<f4").tobytes())


def load_mean_image(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < MEAN_HEADER.size:
        raise FormatError("mean image file shorter than its header")
    h, w = MEAN_HEADER.unpack(raw[: MEAN_HEADER.size])
    expected = MEAN_HEADER.size + h * w * 3 * 4
    if len(raw) != expected:
        raise FormatError("mean image payload truncated")
    data = np.frombuffer(raw, dtype="<f4", offset=MEAN_HEADER.size)
    return data.reshape(h, w, 3).astype(F32)


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
