"""Flat JSON run configuration with typo-safe loading and CLI overrides."""

import dataclasses
import json
from dataclasses import dataclass, field, fields

from .arena import ArenaConstants
from .errors import ArgumentError, FormatError
from .trainer import TrainConfig


@dataclass
class RunConfig:
    """Every knob of the pipeline in one flat namespace.

    Arena physics constants are overridden with ``arena_<field>`` keys
    (e.g. ``arena_gravity``). Unknown keys abort before any side effect.
    """

    seed: int = 0
    data_dir: str = "data"
    out_dir: str = "runs"

    # model
    preset: str = "compact"
    variant: str = "late_integration"
    class_count: int = 10
    frame_count: int = 4
    stack_offsets: tuple = (0, -5, -10, -15)

    # recording
    episodes: int = 20
    tick_limit: int = 1200
    record_mode: str = "expert"  # expert | probe
    record_cpu_level: int = 9
    val_fraction: float = 0.2

    # training
    base_lr: float = 1e-4
    anneal_factor: float = 0.95
    anneal_every: int = 5000
    l2: float = 1e-7
    batch_size: int = 25
    epochs: int = 2
    eval_every: int = 500
    determinism: bool = False

    # play / eval
    top_k: int = 3
    games: int = 10
    play_cpu_level: int = 3
    play_tick_limit: int = 1800
    use_bias: bool = True

    # serve
    port: int = 8000
    tick_hz: float = 30.0
    ui_dir: str = "frontend/dist"

    arena: ArenaConstants = field(default_factory=ArenaConstants)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            base_lr=self.base_lr,
            anneal_factor=self.anneal_factor,
            anneal_every=self.anneal_every,
            l2=self.l2,
            batch_size=self.batch_size,
            epochs=self.epochs,
            eval_every=self.eval_every,
            seed=self.seed,
            determinism=self.determinism,
        )


_SIMPLE_FIELDS = {
    f.name: f for f in fields(RunConfig) if f.name != "arena"
}
_ARENA_FIELDS = {f.name: f for f in fields(ArenaConstants)}


def _coerce(name: str, value, target_type):
    if target_type is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false", "1", "0"):
            return value.lower() in ("true", "1")
        raise ArgumentError(f"{name}: expected a boolean, got {value!r}")
    if target_type is int:
        try:
            out = int(value)
        except (TypeError, ValueError):
            raise ArgumentError(f"{name}: expected an integer, got {value!r}") from None
        return out
    if target_type is float:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ArgumentError(f"{name}: expected a number, got {value!r}") from None
    if target_type is str:
        return str(value)
    if target_type is tuple:
        if isinstance(value, str):
            value = json.loads(value)
        return tuple(int(v) for v in value)
    raise ArgumentError(f"{name}: unsupported config type {target_type}")


def apply_settings(config: RunConfig, settings: dict) -> RunConfig:
    """Apply a flat dict of settings, rejecting unknown keys."""
    plain = {}
    arena_over = {}
    for key, value in settings.items():
        if key in _SIMPLE_FIELDS:
            plain[key] = _coerce(key, value, type(getattr(config, key)))
        elif key.startswith("arena_") and key[len("arena_"):] in _ARENA_FIELDS:
            aname = key[len("arena_"):]
            current = getattr(config.arena, aname)
            arena_over[aname] = _coerce(key, value, type(current))
        else:
            raise ArgumentError(f"unknown config key {key!r}")
    arena = dataclasses.replace(config.arena, **arena_over) if arena_over else config.arena
    return dataclasses.replace(config, arena=arena, **plain)


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Config file first, then command-line overrides on top."""
    config = RunConfig()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise FormatError("config must be a JSON object")
        config = apply_settings(config, raw)
    if overrides:
        config = apply_settings(config, overrides)
    return config


def parse_cli_overrides(pairs) -> dict:
    """['key=value', ...] -> dict; values stay strings for coercion."""
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ArgumentError(f"override {pair!r} must look like key=value")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out
