// Client-side session state; mutations happen only in websocket callbacks.

import type { Mode } from "./protocol";

export interface UiState {
  mode: Mode;
  connected: boolean;
  classes: string[];
  resolution: [number, number];
  latestScores: number[] | null;
  recording: boolean;
  lastTick: number;
  lastError: string | null;
}

export function initialUiState(): UiState {
  return {
    mode: "human",
    connected: false,
    classes: [],
    resolution: [64, 64],
    latestScores: null,
    recording: false,
    lastTick: -1,
    lastError: null,
  };
}
