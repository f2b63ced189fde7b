"""Architecture construction, forward/backward evaluation, checkpoints."""

from .arch import (
    PRESETS,
    VARIANTS,
    ArchitectureSpec,
    LayerDef,
    block_shapes,
    build,
    init_params,
    make_spec,
    param_count,
)
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .net import backward, forward

__all__ = [
    "PRESETS",
    "VARIANTS",
    "ArchitectureSpec",
    "LayerDef",
    "block_shapes",
    "build",
    "init_params",
    "make_spec",
    "param_count",
    "Checkpoint",
    "load_checkpoint",
    "save_checkpoint",
    "forward",
    "backward",
]
