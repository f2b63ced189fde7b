// Wires the gateway stream to the canvas, score bars, keyboard, and controls.

import { connectGateway } from "./client";
import { DEFAULT_KEY_MAP, InputTracker } from "./input";
import type { Mode, ServerMsg } from "./protocol";
import { FramePainter, drawBars } from "./render";
import { initialUiState } from "./state";

const state = initialUiState();
const tracker = new InputTracker(DEFAULT_KEY_MAP);

const frameCanvas = document.getElementById("frame") as HTMLCanvasElement;
const barsCanvas = document.getElementById("bars") as HTMLCanvasElement;
const statusEl = document.getElementById("status")!;
const errorEl = document.getElementById("error")!;
const recordBtn = document.getElementById("record") as HTMLButtonElement;
const modeButtons = Array.from(
  document.querySelectorAll<HTMLButtonElement>("button[data-mode]"),
);

let painter: FramePainter | null = null;
let lastSentClass = -1;

function refreshStatus() {
  statusEl.textContent =
    (state.connected ? "connected" : "disconnected") +
    ` · mode: ${state.mode}` +
    (state.recording ? " · REC" : "");
  statusEl.classList.toggle("offline", !state.connected);
  recordBtn.textContent = state.recording ? "stop recording" : "start recording";
  modeButtons.forEach((b) =>
    b.classList.toggle("active", b.dataset.mode === state.mode),
  );
}

function showError(message: string | null) {
  state.lastError = message;
  errorEl.textContent = message ?? "";
  errorEl.style.display = message ? "inline-block" : "none";
}

function handleMessage(msg: ServerMsg) {
  switch (msg.type) {
    case "hello":
      state.classes = msg.classes;
      state.resolution = msg.resolution;
      state.mode = msg.mode;
      painter = new FramePainter(frameCanvas, msg.resolution[1], msg.resolution[0]);
      refreshStatus();
      break;
    case "frame": {
      state.mode = msg.mode;
      if (!painter) break;
      try {
        const drew = painter.paint(msg.tick, msg.rgb_base64);
        if (drew) state.lastTick = msg.tick;
      } catch (err) {
        showError(String(err));
        break;
      }
      state.latestScores = msg.scores;
      if (msg.scores) drawBars(barsCanvas, msg.scores, state.classes);
      if (state.mode !== "agent") sendInput(msg.tick);
      refreshStatus();
      break;
    }
    case "match_event":
      if (msg.event === "end") showError(null);
      break;
    case "error":
      showError(msg.message);
      break;
  }
}

const socket = new WebSocket(`ws://${location.host}/ws`);
const client = connectGateway(
  socket as never,
  handleMessage,
  (connected) => {
    state.connected = connected;
    refreshStatus();
  },
);

function sendInput(tick: number) {
  const cls = tracker.currentClass();
  if (cls === lastSentClass && cls === 0) return; // idle chatter suppressed
  lastSentClass = cls;
  client.send({ type: "input", tick, class_id: cls });
}

window.addEventListener("keydown", (ev) => {
  if (ev.repeat) return;
  if (DEFAULT_KEY_MAP[ev.code]) ev.preventDefault();
  tracker.keyDown(ev.code);
});
window.addEventListener("keyup", (ev) => {
  tracker.keyUp(ev.code);
});
window.addEventListener("blur", () => tracker.clear());

modeButtons.forEach((btn) => {
  btn.addEventListener("click", () => {
    client.send({ type: "mode", mode: btn.dataset.mode as Mode });
  });
});

recordBtn.addEventListener("click", () => {
  if (state.recording) {
    client.send({ type: "record", action: "stop" });
    state.recording = false;
  } else {
    const name = `ui_${Date.now()}.pxep`;
    client.send({ type: "record", action: "start", path: name });
    state.recording = true;
  }
  refreshStatus();
});

refreshStatus();
