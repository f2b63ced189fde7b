// Keyboard chords -> action classes. Arrows move, Z jumps, X attacks,
// C is special (Down+C / Up+C pick the directional specials).

import { CLASS_IDS } from "./protocol";

export type LogicalKey = "left" | "right" | "up" | "down" | "jump" | "attack" | "special";

export const DEFAULT_KEY_MAP: Record<string, LogicalKey> = {
  ArrowLeft: "left",
  ArrowRight: "right",
  ArrowUp: "up",
  ArrowDown: "down",
  KeyZ: "jump",
  KeyX: "attack",
  KeyC: "special",
};

export function resolveChord(held: ReadonlySet<LogicalKey>): number {
  const left = held.has("left") && !held.has("right");
  const right = held.has("right") && !held.has("left");
  if (held.has("special")) {
    if (held.has("down")) return CLASS_IDS.DOWN_SPECIAL;
    if (held.has("up")) return CLASS_IDS.UP_SPECIAL;
    return CLASS_IDS.SPECIAL;
  }
  if (held.has("attack")) return CLASS_IDS.ATTACK;
  if (held.has("jump")) {
    if (left) return CLASS_IDS.LEFT_JUMP;
    if (right) return CLASS_IDS.RIGHT_JUMP;
    return CLASS_IDS.JUMP;
  }
  if (left) return CLASS_IDS.LEFT;
  if (right) return CLASS_IDS.RIGHT;
  return CLASS_IDS.NONE;
}

/** Tracks held keys from keyboard events; unmapped keys are ignored. */
export class InputTracker {
  private held = new Set<LogicalKey>();

  constructor(private keyMap: Record<string, LogicalKey> = DEFAULT_KEY_MAP) {}

  keyDown(code: string): void {
    const logical = this.keyMap[code];
    if (logical) this.held.add(logical);
  }

  keyUp(code: string): void {
    const logical = this.keyMap[code];
    if (logical) this.held.delete(logical);
  }

  clear(): void {
    this.held.clear();
  }

  currentClass(): number {
    return resolveChord(this.held);
  }
}
