"""Seeded live-match series with Gaussian 95% confidence intervals."""

import math
from dataclasses import dataclass

from ..arena import CPU_LEVELS, ArenaConstants, CpuPolicy, DEFAULTS, run_match
from ..errors import ArgumentError


def mean_and_halfwidth(values):
    """(mean, 1.96 * sample_std / sqrt(n)); half-width 0 when n == 1."""
    n = len(values)
    if n == 0:
        raise ArgumentError("need at least one value")
    mean = sum(values) / n
    if n == 1:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, 1.96 * math.sqrt(var) / math.sqrt(n)


@dataclass
class MatchSeries:
    p1_damage: list
    p2_damage: list
    ticks: list
    p1_mean: float
    p1_halfwidth: float
    p2_mean: float
    p2_halfwidth: float

    @property
    def games(self) -> int:
        return len(self.p1_damage)

    def to_dict(self) -> dict:
        return {
            "games": self.games,
            "p1_damage": self.p1_damage,
            "p2_damage": self.p2_damage,
            "ticks": self.ticks,
            "p1_mean": self.p1_mean,
            "p1_halfwidth": self.p1_halfwidth,
            "p2_mean": self.p2_mean,
            "p2_halfwidth": self.p2_halfwidth,
        }


def run_series(p1_factory, cpu_level: int, games: int, seed: int,
               tick_limit: int = 1800, c: ArenaConstants = DEFAULTS) -> MatchSeries:
    """Independent seeded matches of p1 against a leveled CPU.

    p1_factory(seed) must build a fresh player-1 policy per game so no state
    (frame buffers, reaction history) leaks between games.
    """
    if games < 1:
        raise ArgumentError("games must be >= 1")
    p1_dmg, p2_dmg, ticks = [], [], []
    for g in range(games):
        p1 = p1_factory(seed + 1000 * g + 1)
        p2 = CpuPolicy(1, CPU_LEVELS[cpu_level], seed + 1000 * g + 2, c)
        result = run_match(p1, p2, tick_limit=tick_limit, seed=seed + g, c=c)
        p1_dmg.append(result.damage_dealt[0])
        p2_dmg.append(result.damage_dealt[1])
        ticks.append(result.ticks)
    m1, h1 = mean_and_halfwidth(p1_dmg)
    m2, h2 = mean_and_halfwidth(p2_dmg)
    return MatchSeries(
        p1_damage=p1_dmg, p2_damage=p2_dmg, ticks=ticks,
        p1_mean=m1, p1_halfwidth=h1, p2_mean=m2, p2_halfwidth=h2,
    )
