"""Deterministic 2D platform-duel environment, renderer, and scripted players."""

from .actions import ACTION_NAMES, ATTACK_CLASS_IDS, CLASS_COUNT, MOVEMENT_CLASS_IDS, ActionClass
from .constants import CPU_LEVELS, DEFAULTS, ArenaConstants, CpuLevel, with_overrides
from .match import MatchResult, run_match
from .policies import (
    CpuPolicy,
    DriftMoverPolicy,
    ExpertPolicy,
    ScriptedPolicy,
    VelocityProbePolicy,
    expert_action,
)
from .render import render
from .state import FighterState, GameState, Stage, initial_state, rng_next, step

__all__ = [
    "ACTION_NAMES",
    "ATTACK_CLASS_IDS",
    "CLASS_COUNT",
    "MOVEMENT_CLASS_IDS",
    "ActionClass",
    "CPU_LEVELS",
    "DEFAULTS",
    "ArenaConstants",
    "CpuLevel",
    "with_overrides",
    "MatchResult",
    "run_match",
    "CpuPolicy",
    "DriftMoverPolicy",
    "ExpertPolicy",
    "ScriptedPolicy",
    "VelocityProbePolicy",
    "expert_action",
    "render",
    "FighterState",
    "GameState",
    "Stage",
    "initial_state",
    "rng_next",
    "step",
]
