// Wire types for the gateway's JSON websocket protocol.

export type ServerMsg =
  | { type: "hello"; classes: string[]; resolution: [number, number]; mode: Mode; tick_hz: number }
  | { type: "frame"; tick: number; rgb_base64: string; scores: number[] | null; mode: Mode }
  | { type: "match_event"; event: "ko" | "end"; payload: Record<string, unknown> }
  | { type: "error"; message: string };

export type ClientMsg =
  | { type: "input"; tick: number; class_id: number }
  | { type: "mode"; mode: Mode }
  | { type: "record"; action: "start" | "stop"; path?: string };

export type Mode = "human" | "agent" | "takeover";

// class ids mirror the arena's action vocabulary
export const CLASS_IDS = {
  NONE: 0,
  LEFT: 1,
  RIGHT: 2,
  JUMP: 3,
  LEFT_JUMP: 4,
  RIGHT_JUMP: 5,
  ATTACK: 6,
  SPECIAL: 7,
  DOWN_SPECIAL: 8,
  UP_SPECIAL: 9,
} as const;

// movement-ish classes draw blue, aggressive ones red (score-bar convention)
export const MOVEMENT_IDS = new Set([0, 1, 2, 3, 4, 5]);

export function decodeFrame(rgbBase64: string): Uint8ClampedArray {
  const binary = atob(rgbBase64);
  const out = new Uint8ClampedArray(binary.length);
  for (let i = 0; i < binary.length; i++) out[i] = binary.charCodeAt(i);
  return out;
}
