"""Bit-exact checkpoint persistence.

Layout (all integers little-endian u32 unless noted):

  magic "PXPL" | version | header_len | header JSON (utf-8)
  n_blocks | repeated: name_len, name utf-8, ndim, dims..., raw float32 data

Blocks carry parameters under "p/<name>" and Adam moments under "m/<name>" /
"v/<name>". The header stores the architecture, training iteration, the mean
image hash the model was trained against, and Adam scalars.
"""

import io
import json
import struct
from dataclasses import dataclass

import numpy as np

from ..errors import FormatError
from ..tensorcore import AdamState
from .arch import ArchitectureSpec, block_shapes

MAGIC = b"PXPL"
VERSION = 1
F32 = np.float32


@dataclass
class Checkpoint:
    spec: ArchitectureSpec
    params: dict
    adam: dict | None
    iteration: int
    mean_hash: str


def _write_block(buf, name: str, arr: np.ndarray):
    raw = name.encode("utf-8")
    buf.write(struct.pack("<I", len(raw)))
    buf.write(raw)
    buf.write(struct.pack("<I", arr.ndim))
    buf.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
    buf.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())


def save_checkpoint(path, ckpt: Checkpoint) -> None:
    header = {
        "spec": ckpt.spec.to_dict(),
        "iteration": ckpt.iteration,
        "mean_hash": ckpt.mean_hash,
        "adam": None,
    }
    blocks = [("p/" + k, v) for k, v in ckpt.params.items()]
    if ckpt.adam is not None:
        any_state = next(iter(ckpt.adam.values()))
        header["adam"] = {
            "beta1": any_state.beta1,
            "beta2": any_state.beta2,
            "epsilon": any_state.epsilon,
            "step_counts": {k: s.step_count for k, s in ckpt.adam.items()},
        }
        for k, s in ckpt.adam.items():
            blocks.append(("m/" + k, s.m))
            blocks.append(("v/" + k, s.v))

    raw_header = json.dumps(header, sort_keys=True).encode("utf-8")
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", VERSION))
    buf.write(struct.pack("<I", len(raw_header)))
    buf.write(raw_header)
    buf.write(struct.pack("<I", len(blocks)))
    for name, arr in blocks:
        _write_block(buf, name, arr)
    with open(path, "wb") as fh:
        fh.write(buf.getvalue())


def _read_exact(fh, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(f"truncated checkpoint: wanted {n} bytes, got {len(data)}")
    return data


def load_checkpoint(path) -> Checkpoint:
    with open(path, "rb") as fh:
        if _read_exact(fh, 4) != MAGIC:
            raise FormatError("bad checkpoint magic")
        (version,) = struct.unpack("<I", _read_exact(fh, 4))
        if version != VERSION:
            raise FormatError(f"unsupported checkpoint version {version}")
        (hlen,) = struct.unpack("<I", _read_exact(fh, 4))
        header = json.loads(_read_exact(fh, hlen).decode("utf-8"))
        (n_blocks,) = struct.unpack("<I", _read_exact(fh, 4))
        blocks = {}
        for _ in range(n_blocks):
            (nlen,) = struct.unpack("<I", _read_exact(fh, 4))
            name = _read_exact(fh, nlen).decode("utf-8")
            (ndim,) = struct.unpack("<I", _read_exact(fh, 4))
            shape = struct.unpack(f"<{ndim}I", _read_exact(fh, 4 * ndim))
            count = int(np.prod(shape)) if shape else 1
            data = np.frombuffer(_read_exact(fh, 4 * count), dtype="<f4")
            blocks[name] = data.reshape(shape).astype(F32)
        if fh.read(1):
            raise FormatError("trailing bytes after final block")

    spec = ArchitectureSpec.from_dict(header["spec"])
    expected = block_shapes(spec)
    params = {}
    for name, shape in expected.items():
        key = "p/" + name
        if key not in blocks:
            raise FormatError(f"missing parameter block {name}")
        if blocks[key].shape != shape:
            raise FormatError(
                f"block {name} has shape {blocks[key].shape}, spec wants {shape}"
            )
        params[name] = blocks[key]

    adam = None
    if header.get("adam"):
        meta = header["adam"]
        adam = {}
        for name in expected:
            mk, vk = "m/" + name, "v/" + name
            if mk not in blocks or vk not in blocks:
                raise FormatError(f"missing optimizer block for {name}")
            adam[name] = AdamState(
                step_count=int(meta["step_counts"][name]),
                m=blocks[mk],
                v=blocks[vk],
                beta1=float(meta["beta1"]),
                beta2=float(meta["beta2"]),
                epsilon=float(meta["epsilon"]),
            )
    return Checkpoint(
        spec=spec,
        params=params,
        adam=adam,
        iteration=int(header["iteration"]),
        mean_hash=str(header["mean_hash"]),
    )
