"""Declarative architecture descriptions, shape validation, and initialization.

A model is a convolutional tower plus a dense head. The three variants differ
only in how the tower meets the frame stack:

  single_frame      one tower on the newest frame
  early_integration one tower on all frames concatenated along channels
  late_integration  one untied tower per frame, flattened outputs concatenated
                    before the shared dense head
"""

from dataclasses import dataclass, asdict

import numpy as np

from ..errors import ArgumentError, DimensionError
from ..tensorcore import LrnSpec
from ..tensorcore.ops import conv_output_extent

F32 = np.float32

VARIANTS = ("single_frame", "early_integration", "late_integration")
PRESETS = ("paper_full", "compact")


@dataclass(frozen=True)
class LayerDef:
    """One layer of a tower or head. Unused fields stay at their defaults."""

    kind: str  # conv | relu | lrn | pool | fc | dropout
    kernel: int = 0
    stride: int = 1
    pad: int = 0
    filters: int = 0
    units: int = 0
    p: float = 0.0
    lrn: LrnSpec | None = None


def conv(kernel, filters, stride=1, pad=0):
    return LayerDef("conv", kernel=kernel, stride=stride, pad=pad, filters=filters)


def pool(size, stride):
    return LayerDef("pool", kernel=size, stride=stride)


RELU = LayerDef("relu")
LRN = LayerDef("lrn", lrn=LrnSpec())


@dataclass(frozen=True)
class ArchitectureSpec:
    preset: str
    variant: str
    input_hw: tuple
    frame_count: int
    class_count: int
    tower: tuple
    head: tuple

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ArgumentError(f"unknown variant {self.variant!r}")
        if self.frame_count < 1:
            raise ArgumentError("frame_count must be >= 1")
        if self.variant == "single_frame" and self.frame_count != 1:
            raise ArgumentError("single_frame consumes exactly 1 frame")
        if self.class_count < 2:
            raise ArgumentError("class_count must be >= 2")
        last = self.head[-1]
        if last.kind != "fc" or last.units != self.class_count:
            raise ArgumentError("head must end in an fc layer emitting class_count")
        self.tower_shapes()  # raises DimensionError if the chain is invalid

    @property
    def tower_in_channels(self) -> int:
        return 3 * self.frame_count if self.variant == "early_integration" else 3

    @property
    def tower_count(self) -> int:
        return self.frame_count if self.variant == "late_integration" else 1

    def tower_namespaces(self):
        if self.variant == "late_integration":
            return [f"tower{i}" for i in range(self.frame_count)]
        return ["tower"]

    def tower_shapes(self):
        """(H, W, C) after each tower layer; validates every extent."""
        h, w = self.input_hw
        c = self.tower_in_channels
        shapes = []
        for layer in self.tower:
            if layer.kind == "conv":
                if h + 2 * layer.pad < layer.kernel or w + 2 * layer.pad < layer.kernel:
                    raise DimensionError(
                        f"conv{layer.kernel} cannot consume {h}x{w} with pad {layer.pad}"
                    )
                h = conv_output_extent(h, layer.kernel, layer.stride, layer.pad)
                w = conv_output_extent(w, layer.kernel, layer.stride, layer.pad)
                c = layer.filters
            elif layer.kind == "pool":
                if h < layer.kernel or w < layer.kernel:
                    raise DimensionError(f"pool{layer.kernel} cannot consume {h}x{w}")
                h = (h - layer.kernel) // layer.stride + 1
                w = (w - layer.kernel) // layer.stride + 1
            elif layer.kind not in ("relu", "lrn"):
                raise ArgumentError(f"layer kind {layer.kind!r} not allowed in tower")
            if h < 1 or w < 1:
                raise DimensionError("tower shape collapsed below 1x1")
            shapes.append((h, w, c))
        return shapes

    @property
    def flat_dim(self) -> int:
        h, w, c = self.tower_shapes()[-1]
        return h * w * c

    @property
    def head_in_dim(self) -> int:
        return self.flat_dim * self.tower_count

    @property
    def layers(self):
        return self.tower + self.head

    def to_dict(self) -> dict:
        d = asdict(self)
        d["input_hw"] = list(self.input_hw)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ArchitectureSpec":
        def mk_layer(ld):
            lrn_spec = LrnSpec(**ld["lrn"]) if ld.get("lrn") else None
            return LayerDef(**{**ld, "lrn": lrn_spec})

        return cls(
            preset=d["preset"],
            variant=d["variant"],
            input_hw=tuple(d["input_hw"]),
            frame_count=d["frame_count"],
            class_count=d["class_count"],
            tower=tuple(mk_layer(ld) for ld in d["tower"]),
            head=tuple(mk_layer(ld) for ld in d["head"]),
        )


def _paper_full_layers(class_count):
    tower = (
        conv(7, 96, stride=2, pad=0),
        RELU,
        LRN,
        pool(3, 3),
        conv(5, 256, stride=1, pad=2),
        RELU,
        pool(2, 2),
        conv(3, 512, stride=1, pad=1),
        RELU,
        conv(3, 512, stride=1, pad=1),
        RELU,
        conv(3, 512, stride=1, pad=1),
        RELU,
        pool(3, 3),
    )
    head = (
        LayerDef("fc", units=4096),
        LayerDef("dropout", p=0.5),
        LayerDef("fc", units=4096),
        LayerDef("dropout", p=0.5),
        LayerDef("fc", units=class_count),
    )
    return (128, 128), tower, head


def _compact_layers(class_count):
    tower = (
        conv(5, 32, stride=2, pad=2),
        RELU,
        LRN,
        pool(2, 2),
        conv(3, 64, stride=1, pad=1),
        RELU,
        pool(2, 2),
        conv(3, 64, stride=1, pad=1),
        RELU,
    )
    head = (
        LayerDef("fc", units=256),
        LayerDef("dropout", p=0.5),
        LayerDef("fc", units=class_count),
    )
    return (64, 64), tower, head


def make_spec(preset: str, variant: str, class_count: int, frame_count: int = 4) -> ArchitectureSpec:
    if preset == "paper_full":
        input_hw, tower, head = _paper_full_layers(class_count)
    elif preset == "compact":
        input_hw, tower, head = _compact_layers(class_count)
    else:
        raise ArgumentError(f"unknown preset {preset!r}")
    if variant == "single_frame":
        frame_count = 1
    return ArchitectureSpec(
        preset=preset,
        variant=variant,
        input_hw=input_hw,
        frame_count=frame_count,
        class_count=class_count,
        tower=tower,
        head=head,
    )


def block_shapes(spec: ArchitectureSpec) -> dict:
    """Parameter block name -> shape, in deterministic creation order."""
    shapes = {}
    for ns in spec.tower_namespaces():
        c = spec.tower_in_channels
        for li, layer in enumerate(spec.tower):
            if layer.kind == "conv":
                shapes[f"{ns}.{li}.w"] = (layer.kernel, layer.kernel, c, layer.filters)
                shapes[f"{ns}.{li}.b"] = (layer.filters,)
                c = layer.filters
    n = spec.head_in_dim
    for li, layer in enumerate(spec.head):
        if layer.kind == "fc":
            shapes[f"head.{li}.w"] = (n, layer.units)
            shapes[f"head.{li}.b"] = (layer.units,)
            n = layer.units
    return shapes


def param_count(spec: ArchitectureSpec) -> int:
    return sum(int(np.prod(s)) for s in block_shapes(spec).values())


# inputs are mean-subtracted pixels in pixel units (roughly +-128), not unit
# variance; the first layer's init absorbs that scale so logits start O(1)
PIXEL_SCALE = 128.0


def init_params(spec: ArchitectureSpec, seed: int = 0) -> dict:
    """He-uniform weights (bound sqrt(6 / fan_in)), zero biases.

    The first conv of each tower gets its bound divided by PIXEL_SCALE: He
    scaling assumes unit-variance inputs, and the frame stacks deliberately
    stay in raw pixel units (the preprocessing contract subtracts the mean
    image and nothing else).
    """
    rng = np.random.default_rng(seed)
    first_conv = next(
        (f"{{ns}}.{li}.w" for li, layer in enumerate(spec.tower) if layer.kind == "conv"),
        None,
    )
    first_names = {
        first_conv.format(ns=ns) for ns in spec.tower_namespaces()
    } if first_conv else set()
    params = {}
    for name, shape in block_shapes(spec).items():
        if name.endswith(".b"):
            params[name] = np.zeros(shape, dtype=F32)
        else:
            fan_in = int(np.prod(shape[:-1]))
            bound = float(np.sqrt(6.0 / fan_in))
            if name in first_names:
                bound /= PIXEL_SCALE
            params[name] = rng.uniform(-bound, bound, shape).astype(F32)
    return params


def build(preset: str, variant: str, class_count: int, frame_count: int = 4, seed: int = 0):
    """Construct a validated ArchitectureSpec plus freshly initialized params."""
    spec = make_spec(preset, variant, class_count, frame_count)
    return spec, init_params(spec, seed)
