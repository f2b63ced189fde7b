"""Scripted controllers: the rule-based expert, leveled CPU opponents, and the
velocity-probe pair used to build a dataset whose labels depend on opponent
motion rather than position."""

from collections import deque

import numpy as np

from .actions import ActionClass, CLASS_COUNT
from .constants import ArenaConstants, CpuLevel, DEFAULTS
from .state import GameState


def expert_action(state: GameState, player: int, rng: np.random.Generator,
                  c: ArenaConstants = DEFAULTS, range_scale: float = 1.0) -> int:
    """Priority rules of the demonstrator.

    1. off-stage with recovery available -> UP_SPECIAL
    2. respawn blink (either side) -> wait it out with NONE; attacking an
       invulnerable fighter is pointless, and the pause keeps labels
       consistent while sprites flicker and positions jump
    3. opponent in strike range -- or freshly struck and still close
       (attack strings are committed, not re-decided every tick) ->
       DOWN_SPECIAL if well above, else ATTACK
    4. opponent in the mid-range poke band -> SPECIAL
    5. otherwise an idle draw (NONE) or movement toward the opponent,
       jumping when the opponent is higher
    """
    me = state.fighters[player]
    opp = state.fighters[1 - player]
    dx = opp.x - me.x
    dy = opp.y - me.y
    reach = c.attack_range * range_scale

    if (abs(me.x) > c.stage_half_width or me.y < c.stage_y - 1.0) and me.recovery_available:
        return int(ActionClass.UP_SPECIAL)

    if me.invuln_ticks > 0 or opp.invuln_ticks > 0:
        return int(ActionClass.NONE)

    committed = me.attack_cooldown > 0 and abs(dx) <= reach * 1.5 and abs(dy) <= reach
    if (abs(dx) <= reach and abs(dy) <= reach) or committed:
        if dy > c.h_above:
            return int(ActionClass.DOWN_SPECIAL)
        return int(ActionClass.ATTACK)

    if c.poke_band_inner < abs(dx) <= c.special_range and abs(dy) <= c.attack_v_tol:
        return int(ActionClass.SPECIAL)

    u = rng.random()
    if u < c.p_idle:
        return int(ActionClass.NONE)

    if abs(dx) <= 4.0 and dy > c.jump_gap and not me.airborne:
        return int(ActionClass.JUMP)
    if dx < 0:
        if dy > c.jump_gap and not me.airborne:
            return int(ActionClass.LEFT_JUMP)
        return int(ActionClass.LEFT)
    if dy > c.jump_gap and not me.airborne:
        return int(ActionClass.RIGHT_JUMP)
    return int(ActionClass.RIGHT)


class ExpertPolicy:
    """Seeded wrapper binding expert_action to one player slot."""

    def __init__(self, player: int, seed: int, c: ArenaConstants = DEFAULTS):
        self.player = player
        self.rng = np.random.default_rng(seed)
        self.c = c

    def __call__(self, state: GameState) -> int:
        return expert_action(state, self.player, self.rng, self.c)


class CpuPolicy:
    """Expert rules on a stale state snapshot, with uniform action noise.

    The snapshot lags reaction_delay ticks; with probability action_noise the
    chosen action is replaced by a uniformly random class. aggression scales
    the strike range the delayed expert perceives.
    """

    def __init__(self, player: int, level: CpuLevel, seed: int,
                 c: ArenaConstants = DEFAULTS):
        self.player = player
        self.level = level
        self.rng = np.random.default_rng(seed)
        self.c = c
        self.history = deque(maxlen=level.reaction_delay + 1)

    def __call__(self, state: GameState) -> int:
        self.history.append(state)
        snapshot = self.history[0]
        if self.level.action_noise > 0 and self.rng.random() < self.level.action_noise:
            return int(self.rng.integers(CLASS_COUNT))
        return expert_action(snapshot, self.player, self.rng, self.c,
                             range_scale=self.level.aggression)


class ScriptedPolicy:
    """Emits a fixed action every tick (handy for tests and dummies)."""

    def __init__(self, action: int):
        self.action = int(action)

    def __call__(self, state: GameState) -> int:
        return self.action


class DriftMoverPolicy:
    """Hops constantly and drifts left/right in seeded phases while airborne.

    Air drift never updates facing, so a single frame carries no cue about
    the motion direction; only the frame stack does.
    """

    def __init__(self, player: int, seed: int, c: ArenaConstants = DEFAULTS):
        self.player = player
        self.rng = np.random.default_rng(seed)
        self.c = c
        self.direction = 1 if self.rng.random() < 0.5 else -1
        self.phase_left = int(self.rng.integers(20, 50))

    def __call__(self, state: GameState) -> int:
        me = state.fighters[self.player]
        self.phase_left -= 1
        if self.phase_left <= 0:
            self.direction = -self.direction
            self.phase_left = int(self.rng.integers(20, 50))
        # steer back toward the stage instead of drifting off it
        if me.x > self.c.stage_half_width * 0.7:
            self.direction = -1
        elif me.x < -self.c.stage_half_width * 0.7:
            self.direction = 1
        if not me.airborne:
            return int(ActionClass.JUMP)
        return int(ActionClass.LEFT if self.direction < 0 else ActionClass.RIGHT)


class VelocityProbePolicy:
    """Labels the opponent's horizontal motion direction.

    Pure function of opponent velocity, the quantity a single frame cannot
    show; used to build the temporal-integration probe dataset. The labels
    are strike classes (leftward -> ATTACK, rightward -> SPECIAL) because a
    whiffed strike neither moves nor re-renders the labeler, so a single
    frame carries no echo of past labels; the probe recording zeroes the
    strike ranges so the whiffs stay physically inert too.
    """

    def __init__(self, player: int, threshold: float = 0.4):
        self.player = player
        self.threshold = threshold

    def __call__(self, state: GameState) -> int:
        vx = state.fighters[1 - self.player].vx
        if vx < -self.threshold:
            return int(ActionClass.ATTACK)
        if vx > self.threshold:
            return int(ActionClass.SPECIAL)
        return int(ActionClass.NONE)
