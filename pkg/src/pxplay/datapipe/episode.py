"""Bit-exact episode container: raw native frames + per-tick labels + stamps.

Layout (little-endian u32 header fields):

  magic "PXEP" | version | width | height | channels(=3) | frame_count |
  tick_rate | frames u8[count*h*w*3] | labels u8[count] | stamps u32[count]

Files are self-validating: the byte length must match the header exactly and
tick stamps must be strictly increasing.
"""

import struct
from dataclasses import dataclass

import numpy as np

from ..errors import FormatError

MAGIC = b"PXEP"
VERSION = 1
HEADER = struct.Struct("<4sIIIIII")


@dataclass
class Episode:
    width: int
    height: int
    tick_rate: int
    frames: np.ndarray  # (N, H, W, 3) u8
    labels: np.ndarray  # (N,) u8
    stamps: np.ndarray  # (N,) u32

    def __post_init__(self):
        n = len(self.frames)
        if not (len(self.labels) == len(self.stamps) == n):
            raise FormatError("frame, label, and stamp counts disagree")
        if n > 1 and not np.all(np.diff(self.stamps.astype(np.int64)) > 0):
            raise FormatError("tick stamps must be strictly increasing")

    @property
    def frame_count(self) -> int:
        return len(self.frames)


def write_episode(path, ep: Episode) -> None:
    frames = np.ascontiguousarray(ep.frames, dtype=np.uint8)
    labels = np.ascontiguousarray(ep.labels, dtype=np.uint8)
    stamps = np.ascontiguousarray(ep.stamps, dtype="<u4")
    if frames.shape != (len(frames), ep.height, ep.width, 3):
        raise FormatError(f"frame array shape {frames.shape} does not match header")
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, ep.width, ep.height, 3,
                             len(frames), ep.tick_rate))
        fh.write(frames.tobytes())
        fh.write(labels.tobytes())
        fh.write(stamps.tobytes())


def _parse_header(raw: bytes):
    if len(raw) < HEADER.size:
        raise FormatError("episode file shorter than its header")
    magic, version, width, height, channels, count, tick_rate = HEADER.unpack(
        raw[: HEADER.size]
    )
    if magic != MAGIC:
        raise FormatError("bad episode magic")
    if version != VERSION:
        raise FormatError(f"unsupported episode version {version}")
    if channels != 3:
        raise FormatError(f"expected 3 channels, got {channels}")
    return width, height, count, tick_rate


def load_episode(path) -> Episode:
    with open(path, "rb") as fh:
        raw = fh.read()
    width, height, count, tick_rate = _parse_header(raw)
    frame_bytes = count * height * width * 3
    expected = HEADER.size + frame_bytes + count + 4 * count
    if len(raw) != expected:
        raise FormatError(
            f"episode length {len(raw)} != expected {expected} (truncated or padded)"
        )
    off = HEADER.size
    frames = np.frombuffer(raw, dtype=np.uint8, count=frame_bytes, offset=off)
    frames = frames.reshape(count, height, width, 3).copy()
    off += frame_bytes
    labels = np.frombuffer(raw, dtype=np.uint8, count=count, offset=off).copy()
    off += count
    stamps = np.frombuffer(raw, dtype="<u4", count=count, offset=off).astype(np.uint32)
    return Episode(width=width, height=height, tick_rate=tick_rate,
                   frames=frames, labels=labels, stamps=stamps)


def load_labels(path) -> np.ndarray:
    """Read only the label track (cheap: seeks past the frame payload)."""
    with open(path, "rb") as fh:
        head = fh.read(HEADER.size)
        width, height, count, _ = _parse_header(head)
        fh.seek(HEADER.size + count * height * width * 3)
        data = fh.read(count)
    if len(data) != count:
        raise FormatError("episode label track truncated")
    return np.frombuffer(data, dtype=np.uint8).copy()
