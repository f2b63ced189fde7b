"""Whole-match driver with damage-dealt accounting."""

from dataclasses import dataclass, field

from ..errors import ArgumentError
from .constants import ArenaConstants, DEFAULTS
from .state import initial_state, step


@dataclass
class MatchResult:
    damage_dealt: tuple  # cumulative percent credited to (p1, p2), survives respawns
    stocks_lost: tuple
    ko_log: list = field(default_factory=list)  # (tick, victim index)
    ticks: int = 0


def run_match(policy_p1, policy_p2, tick_limit: int, seed: int,
              c: ArenaConstants = DEFAULTS) -> MatchResult:
    """Run until a fighter is out of stocks or the tick limit hits.

    Each hit's damage increment is credited to the attacker, cumulatively
    across respawns, so totals above 100% are normal.
    """
    if tick_limit <= 0:
        raise ArgumentError("tick_limit must be positive")
    state = initial_state(seed, c)
    dealt = [0.0, 0.0]
    ko_log = []
    while not state.match_over and state.tick < tick_limit:
        a1 = policy_p1(state)
        a2 = policy_p2(state)
        prev = state
        state = step(state, a1, a2, c)
        for i in (0, 1):
            inc = state.fighters[i].damage_percent - prev.fighters[i].damage_percent
            if inc > 0:
                dealt[1 - i] += inc
            if state.fighters[i].stocks < prev.fighters[i].stocks:
                ko_log.append((state.tick, i))
    return MatchResult(
        damage_dealt=(dealt[0], dealt[1]),
        stocks_lost=(
            c.stocks - state.fighters[0].stocks,
            c.stocks - state.fighters[1].stocks,
        ),
        ko_log=ko_log,
        ticks=state.tick,
    )
