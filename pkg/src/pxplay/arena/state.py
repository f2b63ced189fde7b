"""Fixed-timestep duel physics: pure value-semantics state transitions."""

from dataclasses import dataclass, replace

from ..errors import StateError
from .actions import ActionClass
from .constants import ArenaConstants, DEFAULTS

_MASK = (1 << 64) - 1


def rng_next(state: int):
    """splitmix64: returns (uniform u64 value, next state). Pure and portable."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)), state


@dataclass(frozen=True)
class FighterState:
    x: float
    y: float
    vx: float
    vy: float
    facing: int  # +1 right, -1 left
    damage_percent: float
    stocks: int
    airborne: bool
    attack_cooldown: int
    invuln_ticks: int
    recovery_available: bool
    palette_id: int


@dataclass(frozen=True)
class Stage:
    x_left: float
    x_right: float
    y_stage: float
    y_kill: float


@dataclass(frozen=True)
class GameState:
    tick: int
    fighters: tuple
    stage: Stage
    rng_state: int
    match_over: bool


def initial_state(seed: int, c: ArenaConstants = DEFAULTS) -> GameState:
    def spawn(side: int, palette: int) -> FighterState:
        return FighterState(
            x=12.0 * side,
            y=c.stage_y,
            vx=0.0,
            vy=0.0,
            facing=-side,
            damage_percent=0.0,
            stocks=c.stocks,
            airborne=False,
            attack_cooldown=0,
            invuln_ticks=0,
            recovery_available=True,
            palette_id=palette,
        )

    rng_state = (seed * 0x9E3779B97F4A7C15 + 0x632BE59BD9B4E019) & _MASK
    return GameState(
        tick=0,
        fighters=(spawn(-1, 0), spawn(+1, 1)),
        stage=Stage(-c.stage_half_width, c.stage_half_width, c.stage_y, c.kill_y),
        rng_state=rng_state,
        match_over=False,
    )


_DIRS = {
    ActionClass.LEFT: -1,
    ActionClass.RIGHT: +1,
    ActionClass.LEFT_JUMP: -1,
    ActionClass.RIGHT_JUMP: +1,
}
_JUMPS = {ActionClass.JUMP, ActionClass.LEFT_JUMP, ActionClass.RIGHT_JUMP}
_STRIKES = {ActionClass.ATTACK, ActionClass.SPECIAL, ActionClass.DOWN_SPECIAL}


def _movement(f: FighterState, action: int, c: ArenaConstants) -> FighterState:
    action = ActionClass(action)
    vx, vy, facing = f.vx, f.vy, f.facing
    airborne, recovery = f.airborne, f.recovery_available

    if action == ActionClass.UP_SPECIAL and recovery:
        toward_center = -1 if f.x > 0 else 1
        vy = c.up_special_vy
        vx = c.up_special_vx * toward_center
        airborne = True
        recovery = False
    elif action in _DIRS:
        d = _DIRS[action]
        if not airborne:
            vx = d * c.walk_speed
            facing = d
            if action in _JUMPS:
                vy = c.jump_impulse
                airborne = True
        else:
            # air drift never turns the sprite and never exceeds the drift cap,
            # but preserves any larger knockback momentum
            cap = max(c.air_speed_cap, abs(vx))
            vx = vx + d * c.air_accel
            vx = max(-cap, min(cap, vx))
    elif action == ActionClass.JUMP:
        if not airborne:
            vy = c.jump_impulse
            airborne = True
    else:
        if not airborne:
            vx *= c.ground_friction

    return replace(f, vx=vx, vy=vy, facing=facing, airborne=airborne,
                   recovery_available=recovery)


def _hit(attacker: FighterState, victim: FighterState, action: int, c: ArenaConstants):
    """Returns (damage, kb_vx, kb_vy) if the strike lands, else None."""
    if victim.invuln_ticks > 0:
        return None
    dx = victim.x - attacker.x
    dy = victim.y - attacker.y
    direction = attacker.facing if dx == 0 else (1 if dx > 0 else -1)
    scale = 1.0 + victim.damage_percent / 100.0
    action = ActionClass(action)
    if action == ActionClass.ATTACK:
        if abs(dx) <= c.attack_range and abs(dy) <= c.attack_v_tol:
            return (c.attack_damage,
                    direction * c.knockback_base * scale,
                    c.knockback_up * scale)
    elif action == ActionClass.SPECIAL:
        if abs(dx) <= c.special_range and abs(dy) <= c.attack_v_tol:
            return (c.special_damage,
                    direction * c.knockback_base * 0.6 * scale,
                    c.knockback_up * 0.6 * scale)
    elif action == ActionClass.DOWN_SPECIAL:
        if abs(dx) <= c.down_special_halfwidth and 0.0 < dy <= c.down_special_height:
            return (c.down_special_damage,
                    direction * c.knockback_base * 0.5 * scale,
                    c.knockback_up * 1.6 * scale)
    return None


def step(state: GameState, action_p1: int, action_p2: int,
         c: ArenaConstants = DEFAULTS) -> GameState:
    """Advance one tick. Deterministic; the environment RNG is touched only
    for respawn invulnerability jitter.

    Per-tick order: timers, simultaneous attack resolution on current
    positions, movement inputs, integration (gravity, landing, walk-off),
    KO/respawn, tick increment.
    """
    if state.match_over:
        raise StateError("cannot step a finished match")

    actions = (action_p1, action_p2)
    f = [
        replace(
            fi,
            attack_cooldown=max(0, fi.attack_cooldown - 1),
            invuln_ticks=max(0, fi.invuln_ticks - 1),
        )
        for fi in state.fighters
    ]

    # simultaneous strikes from the same snapshot
    strikes = [None, None]
    cooldowns = [f[0].attack_cooldown, f[1].attack_cooldown]
    for i in (0, 1):
        if ActionClass(actions[i]) in _STRIKES and f[i].attack_cooldown == 0:
            strikes[i] = _hit(f[i], f[1 - i], actions[i], c)
            cooldowns[i] = c.attack_cooldown
    for i in (0, 1):
        if strikes[i] is not None:
            dmg, kvx, kvy = strikes[i]
            victim = f[1 - i]
            f[1 - i] = replace(
                victim,
                damage_percent=victim.damage_percent + dmg,
                vx=kvx,
                vy=kvy,
                airborne=True,
            )
        f[i] = replace(f[i], attack_cooldown=cooldowns[i])

    # movement and integration
    rng_state = state.rng_state
    for i in (0, 1):
        fi = _movement(f[i], actions[i], c)
        x, y, vx, vy = fi.x, fi.y, fi.vx, fi.vy
        airborne, recovery = fi.airborne, fi.recovery_available
        if airborne:
            vy -= c.gravity
            old_y = y
            x += vx
            y += vy
            if (vy <= 0.0 and old_y >= c.stage_y >= y
                    and abs(x) <= c.stage_half_width):
                y = c.stage_y
                vy = 0.0
                airborne = False
                recovery = True
        else:
            x += vx
            if abs(x) > c.stage_half_width:
                airborne = True
        f[i] = replace(fi, x=x, y=y, vx=vx, vy=vy, airborne=airborne,
                       recovery_available=recovery)

    # KO and respаwn
    match_over = False
    for i in (0, 1):
        fi = f[i]
        if fi.y < c.kill_y or abs(fi.x) > c.kill_x:
            stocks = fi.stocks - 1
            if stocks <= 0:
                f[i] = replace(fi, stocks=0)
                match_over = True
            else:
                jitter, rng_state = rng_next(rng_state)
                opponent = f[1 - i]
                f[i] = FighterState(
                    x=0.0,
                    y=c.stage_y,
                    vx=0.0,
                    vy=0.0,
                    facing=1 if opponent.x >= 0 else -1,
                    damage_percent=0.0,
                    stocks=stocks,
                    airborne=False,
                    attack_cooldown=0,
                    invuln_ticks=c.respawn_invuln + int(jitter % 6),
                    recovery_available=True,
                    palette_id=fi.palette_id,
                )

    return GameState(
        tick=state.tick + 1,
        fighters=(f[0], f[1]),
        stage=state.stage,
        rng_state=rng_state,
        match_over=match_over,
    )
