"""Dependency-free report artifacts: JSON metrics, PPM/PGM images.

Saliency frames persist as binary PPM (P6). Values span [0, 256] inclusive,
so maxval is 256 and every sample is 2 bytes most-significant-first, per the
netpbm convention for maxval > 255. Confusion heat data persists as 16-bit
PGM (P5) scaled by its peak count.
"""

import json
import re
from pathlib import Path

import numpy as np

from ..errors import FormatError


def write_ppm(path, img: np.ndarray, maxval: int = 255) -> None:
    img = np.asarray(np.rint(img), dtype=np.int64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise FormatError("PPM wants (H, W, 3)")
    if img.min() < 0 or img.max() > maxval:
        raise FormatError(f"pixel values outside [0, {maxval}]")
    h, w = img.shape[:2]
    header = f"P6\n{w} {h}\n{maxval}\n".encode("ascii")
    if maxval > 255:
        payload = img.astype(">u2").tobytes()
    else:
        payload = img.astype(np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(header + payload)


def write_pgm(path, img: np.ndarray, maxval: int = 65535) -> None:
    img = np.asarray(np.rint(img), dtype=np.int64)
    if img.ndim != 2:
        raise FormatError("PGM wants (H, W)")
    if img.min() < 0 or img.max() > maxval:
        raise FormatError(f"pixel values outside [0, {maxval}]")
    h, w = img.shape
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    payload = img.astype(">u2" if maxval > 255 else np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(header + payload)


def _read_netpbm(path, magic: bytes):
    data = Path(path).read_bytes()
    m = re.match(rb"(P[56])\s+(\d+)\s+(\d+)\s+(\d+)\s", data)
    if not m or m.group(1) != magic:
        raise FormatError(f"not a {magic.decode()} file")
    w, h, maxval = int(m.group(2)), int(m.group(3)), int(m.group(4))
    payload = data[m.end():]
    channels = 3 if magic == b"P6" else 1
    dtype = ">u2" if maxval > 255 else np.uint8
    arr = np.frombuffer(payload, dtype=dtype)
    expected = w * h * channels
    if arr.size != expected:
        raise FormatError("netpbm payload size mismatch")
    arr = arr.astype(np.int64).reshape((h, w, 3) if channels == 3 else (h, w))
    return arr, maxval


def read_ppm(path):
    return _read_netpbm(path, b"P6")


def read_pgm(path):
    return _read_netpbm(path, b"P5")


def export_report(out_dir, metrics: dict, confusion=None, saliency_maps=None) -> dict:
    """Write report.json plus image artifacts; returns the JSON dict.

    metrics: flat name -> value or {"mean": m, "halfwidth": h} entries.
    confusion: ConfusionMatrix or None.
    saliency_maps: list of (tag, maps (F, H, W, 3)) or None.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = {"metrics": metrics}
    if confusion is not None:
        doc["confusion"] = {
            "counts": confusion.counts.tolist(),
            "normalized": confusion.normalized().tolist(),
            "priors": confusion.priors.tolist(),
        }
        peak = max(1, int(confusion.counts.max()))
        heat = confusion.counts.astype(np.float64) / peak * 65535.0
        write_pgm(out_dir / "confusion_counts.pgm", heat)
    if saliency_maps:
        names = []
        for tag, maps in saliency_maps:
            for f in range(maps.shape[0]):
                name = f"saliency_{tag}_f{f}.ppm"
                write_ppm(out_dir / name, maps[f], maxval=256)
                names.append(name)
        doc["saliency_files"] = names
    with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc
