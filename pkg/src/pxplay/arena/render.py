"""Flat-shaded RGB renderer: a pure function of GameState.

World window: x in [-48, 48], y in [-16, 64]; uniform scale at the native
192x160 resolution (2 px per unit). Fighters are palette-colored rectangles
with a facing notch and a damage-tinted outline; the platform top carries a
bright edge highlight so the background has learnable structure.
"""

import numpy as np

from ..errors import ArgumentError
from .constants import ArenaConstants, DEFAULTS
from .state import GameState

BACKGROUND = (30, 32, 46)
PLATFORM = (94, 72, 55)
PLATFORM_EDGE = (214, 209, 180)
PALETTES = ((240, 200, 40), (208, 62, 48))
MARKER = (18, 18, 18)

WORLD_X = (-48.0, 48.0)
WORLD_Y = (-16.0, 64.0)

FIGHTER_HALF_W = 3.0
FIGHTER_H = 9.0


def _fill(img, r0, r1, c0, c1, color):
    h, w, _ = img.shape
    r0, r1 = max(0, r0), min(h, r1)
    c0, c1 = max(0, c0), min(w, c1)
    if r0 < r1 and c0 < c1:
        img[r0:r1, c0:c1] = color


def _damage_tint(damage: float):
    t = min(1.0, damage / 150.0)
    return (
        int(250 + (255 - 250) * t),
        int(250 + (40 - 250) * t),
        int(250 + (40 - 250) * t),
    )


def render(state: GameState, width: int | None = None, height: int | None = None,
           c: ArenaConstants = DEFAULTS) -> np.ndarray:
    """RGB u8 frame of shape (height, width, 3)."""
    width = c.native_width if width is None else width
    height = c.native_height if height is None else height
    if width < 32 or height < 32:
        raise ArgumentError("render target must be at least 32x32")

    sx = width / (WORLD_X[1] - WORLD_X[0])
    sy = height / (WORLD_Y[1] - WORLD_Y[0])

    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:] = BACKGROUND

    def to_col(wx: float) -> int:
        return int((wx - WORLD_X[0]) * sx)

    def to_row(wy: float) -> int:
        return height - 1 - int((wy - WORLD_Y[0]) * sy)

    # platform slab with a 2-px top edge highlight
    top = to_row(c.stage_y)
    bottom = to_row(c.stage_y - 3.0)
    left = to_col(-c.stage_half_width)
    right = to_col(c.stage_half_width)
    _fill(img, top, bottom + 1, left, right + 1, PLATFORM)
    _fill(img, top, top + 2, left, right + 1, PLATFORM_EDGE)

    # draw P2 first so P1 wins overlaps
    for idx in (1, 0):
        fighter = state.fighters[idx]
        if fighter.stocks <= 0:
            continue
        if fighter.invuln_ticks > 0 and (fighter.invuln_ticks // 3) % 2 == 1:
            continue  # respawn blink: hidden phase
        r0 = to_row(fighter.y + FIGHTER_H)
        r1 = to_row(fighter.y)
        c0 = to_col(fighter.x - FIGHTER_HALF_W)
        c1 = to_col(fighter.x + FIGHTER_HALF_W)
        body = PALETTES[fighter.palette_id % len(PALETTES)]
        outline = _damage_tint(fighter.damage_percent)
        _fill(img, r0, r1 + 1, c0, c1 + 1, outline)
        _fill(img, r0 + 1, r1, c0 + 1, c1, body)
        # facing notch at head height on the forward edge
        if fighter.facing >= 0:
            _fill(img, r0 + 2, r0 + 5, c1 - 3, c1, MARKER)
        else:
            _fill(img, r0 + 2, r0 + 5, c0 + 1, c0 + 4, MARKER)
    return img
