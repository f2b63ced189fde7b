"""Demonstration recording: drive the arena, label every rendered tick."""

import numpy as np

from ..arena import ArenaConstants, DEFAULTS, initial_state, render, step
from .episode import Episode, write_episode


def record_episode(seed: int, policy_p1, policy_p2, tick_limit: int, path,
                   c: ArenaConstants = DEFAULTS) -> Episode:
    """Run one match, storing the native frame, player-1 action, and tick.

    The frame written at tick t is the state the acting policy saw when it
    chose the stored label. Stops early if the match ends.
    """
    state = initial_state(seed, c)
    frames, labels, stamps = [], [], []
    while not state.match_over and len(frames) < tick_limit:
        frames.append(render(state, c=c))
        a1 = policy_p1(state)
        a2 = policy_p2(state)
        labels.append(a1)
        stamps.append(state.tick)
        state = step(state, a1, a2, c)
    ep = Episode(
        width=c.native_width,
        height=c.native_height,
        tick_rate=c.tick_rate,
        frames=np.stack(frames),
        labels=np.asarray(labels, dtype=np.uint8),
        stamps=np.asarray(stamps, dtype=np.uint32),
    )
    write_episode(path, ep)
    return ep
