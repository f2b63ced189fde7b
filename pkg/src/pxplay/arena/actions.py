"""The 10-class action vocabulary. Ids are dense, stable, and serialized as-is."""

from enum import IntEnum


class ActionClass(IntEnum):
    NONE = 0
    LEFT = 1
    RIGHT = 2
    JUMP = 3
    LEFT_JUMP = 4
    RIGHT_JUMP = 5
    ATTACK = 6
    SPECIAL = 7
    DOWN_SPECIAL = 8
    UP_SPECIAL = 9


ACTION_NAMES = [a.name for a in ActionClass]
CLASS_COUNT = len(ACTION_NAMES)

# movement-ish classes render blue in score displays, aggressive ones red
MOVEMENT_CLASS_IDS = frozenset(
    {ActionClass.NONE, ActionClass.LEFT, ActionClass.RIGHT, ActionClass.JUMP,
     ActionClass.LEFT_JUMP, ActionClass.RIGHT_JUMP}
)
ATTACK_CLASS_IDS = frozenset(
    {ActionClass.ATTACK, ActionClass.SPECIAL, ActionClass.DOWN_SPECIAL,
     ActionClass.UP_SPECIAL}
)
