// Pure geometry/pixel helpers for the canvas and score bars.

import { MOVEMENT_IDS, decodeFrame } from "./protocol";

export const BLUE = "#4a7fd4";
export const RED = "#d24a3e";

export interface Bar {
  heightPx: number;
  color: string;
  label: string;
  value: number;
}

/** Bar heights proportional to scores: height = round(score * plotHeight). */
export function computeBars(scores: number[], classes: string[], plotHeight: number): Bar[] {
  return scores.map((s, i) => ({
    heightPx: Math.round(s * plotHeight),
    color: MOVEMENT_IDS.has(i) ? BLUE : RED,
    label: classes[i] ?? `#${i}`,
    value: s,
  }));
}

/** Largest integer upscale that fits the frame into the canvas. */
export function integerScale(frameW: number, frameH: number, canvasW: number, canvasH: number): number {
  return Math.max(1, Math.floor(Math.min(canvasW / frameW, canvasH / frameH)));
}

/** RGB bytes -> RGBA ImageData-ready buffer. */
export function rgbToRgba(rgb: Uint8ClampedArray): Uint8ClampedArray<ArrayBuffer> {
  const pixels = rgb.length / 3;
  const out = new Uint8ClampedArray(new ArrayBuffer(pixels * 4));
  for (let i = 0; i < pixels; i++) {
    out[i * 4] = rgb[i * 3];
    out[i * 4 + 1] = rgb[i * 3 + 1];
    out[i * 4 + 2] = rgb[i * 3 + 2];
    out[i * 4 + 3] = 255;
  }
  return out;
}

export class FramePainter {
  private off: HTMLCanvasElement;
  private lastTick = -1;

  constructor(
    private canvas: HTMLCanvasElement,
    private frameW: number,
    private frameH: number,
  ) {
    this.off = document.createElement("canvas");
    this.off.width = frameW;
    this.off.height = frameH;
  }

  /** Paints a frame unless it is out of order; returns whether it drew. */
  paint(tick: number, rgbBase64: string): boolean {
    if (tick <= this.lastTick) return false; // monotone display only
    this.lastTick = tick;
    const rgb = decodeFrame(rgbBase64);
    if (rgb.length !== this.frameW * this.frameH * 3) {
      throw new Error(`frame payload is ${rgb.length} bytes, expected ${this.frameW * this.frameH * 3}`);
    }
    const octx = this.off.getContext("2d")!;
    octx.putImageData(new ImageData(rgbToRgba(rgb), this.frameW, this.frameH), 0, 0);
    const ctx = this.canvas.getContext("2d")!;
    const scale = integerScale(this.frameW, this.frameH, this.canvas.width, this.canvas.height);
    ctx.imageSmoothingEnabled = false; // crisp nearest-neighbor blocks
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.drawImage(this.off, 0, 0, this.frameW * scale, this.frameH * scale);
    return true;
  }
}

export function drawBars(
  canvas: HTMLCanvasElement,
  scores: number[],
  classes: string[],
): Bar[] {
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const plotHeight = canvas.height - 16;
  const bars = computeBars(scores, classes, plotHeight);
  const slot = canvas.width / bars.length;
  const barW = Math.max(2, Math.floor(slot * 0.7));
  ctx.font = "8px monospace";
  bars.forEach((bar, i) => {
    const x = Math.floor(i * slot + (slot - barW) / 2);
    ctx.fillStyle = bar.color;
    ctx.fillRect(x, canvas.height - 16 - bar.heightPx, barW, bar.heightPx);
    ctx.fillStyle = "#ccc";
    ctx.save();
    ctx.translate(x + barW / 2, canvas.height - 2);
    ctx.fillText(bar.label.slice(0, 4), -10, 0);
    ctx.restore();
  });
  return bars;
}
