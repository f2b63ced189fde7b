"""Singlesource of truth for every physics and behavior constant.

Stage coordinates: x grows rightward, y grows upward, platform top at y=0.
All speeds are stage units per tick at 30 ticks per second.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ArenaConstants:
    tick_rate: int = 30

    # physics
    gravity: float = 0.22
    walk_speed: float = 1.1
    air_accel: float = 0.25
    air_speed_cap: float = 1.6
    ground_friction: float = 0.75
    jump_impulse: float = 3.4
    up_special_vy: float = 4.6
    up_special_vx: float = 1.6

    # combat
    attack_range: float = 7.0
    attack_v_tol: float = 4.0
    attack_damage: float = 9.0
    attack_cooldown: int = 10
    special_range: float = 13.0
    special_damage: float = 5.0
    down_special_halfwidth: float = 6.0
    down_special_height: float = 10.0
    down_special_damage: float = 7.0
    knockback_base: float = 2.6
    knockback_up: float = 1.2

    # stage
    stage_half_width: float = 40.0
    stage_y: float = 0.0
    kill_y: float = -30.0
    kill_x: float = 60.0
    stocks: int = 3
    respawn_invuln: int = 30

    # scripted expert behavior; the idle rate trades label noise (which caps
    # achievable imitation accuracy) against NONE's histogram dominance
    p_idle: float = 0.20
    poke_band_inner: float = 9.5
    h_above: float = 4.0
    jump_gap: float = 6.0

    # rendering
    native_width: int = 192
    native_height: int = 160


def with_overrides(c: ArenaConstants, **kwargs) -> ArenaConstants:
    return replace(c, **kwargs)


DEFAULTS = ArenaConstants()


@dataclass(frozen=True)
class CpuLevel:
    """Difficulty tier: how stale and noisy the scripted opponent's view is."""

    level: int
    reaction_delay: int
    action_noise: float
    aggression: float  # multiplier on attack range


CPU_LEVELS = {
    3: CpuLevel(level=3, reaction_delay=12, action_noise=0.30, aggression=0.80),
    6: CpuLevel(level=6, reaction_delay=6, action_noise=0.15, aggression=0.90),
    9: CpuLevel(level=9, reaction_delay=2, action_noise=0.05, aggression=1.00),
}
