import { describe, expect, it } from "vitest";

import { BLUE, RED, computeBars, integerScale, rgbToRgba } from "./render";
import { decodeFrame } from "./protocol";

const CLASSES = [
  "NONE", "LEFT", "RIGHT", "JUMP", "LEFT_JUMP", "RIGHT_JUMP",
  "ATTACK", "SPECIAL", "DOWN_SPECIAL", "UP_SPECIAL",
];

describe("computeBars", () => {
  it("heights are proportional to scores within 1 px", () => {
    const scores = [0.5, 0.25, 0.15, 0.1, 0, 0, 0, 0, 0, 0];
    const plot = 200;
    const bars = computeBars(scores, CLASSES, plot);
    bars.forEach((bar, i) => {
      expect(Math.abs(bar.heightPx - scores[i] * plot)).toBeLessThanOrEqual(0.5);
    });
    // proportionality between any two nonzero bars
    expect(Math.abs(bars[0].heightPx / bars[1].heightPx - 2)).toBeLessThan(0.05);
  });

  it("uniform scores give equal-height bars", () => {
    const bars = computeBars(new Array(10).fill(0.1), CLASSES, 300);
    const heights = new Set(bars.map((b) => b.heightPx));
    expect(heights.size).toBe(1);
  });

  it("movement classes are blue, strike classes red", () => {
    const bars = computeBars(new Array(10).fill(0.1), CLASSES, 100);
    for (const i of [0, 1, 2, 3, 4, 5]) expect(bars[i].color).toBe(BLUE);
    for (const i of [6, 7, 8, 9]) expect(bars[i].color).toBe(RED);
  });

  it("labels follow the class table", () => {
    const bars = computeBars(new Array(10).fill(0.1), CLASSES, 100);
    expect(bars[8].label).toBe("DOWN_SPECIAL");
  });
});

describe("frame decoding and scaling", () => {
  it("decodes base64 rgb with exact payload length", () => {
    const rgb = new Uint8Array([1, 2, 3, 4, 5, 6]);
    const b64 = btoa(String.fromCharCode(...rgb));
    const out = decodeFrame(b64);
    expect(out.length).toBe(6);
    expect(Array.from(out)).toEqual([1, 2, 3, 4, 5, 6]);
  });

  it("rgb -> rgba inserts opaque alpha", () => {
    const rgba = rgbToRgba(new Uint8ClampedArray([10, 20, 30, 40, 50, 60]));
    expect(Array.from(rgba)).toEqual([10, 20, 30, 255, 40, 50, 60, 255]);
  });

  it("64x64 frame on a 256x256 canvas scales each pixel to a 4x4 block", () => {
    expect(integerScale(64, 64, 256, 256)).toBe(4);
    expect(integerScale(64, 64, 300, 300)).toBe(4); // never fractional
    expect(integerScale(64, 64, 63, 63)).toBe(1); // floor at 1
  });
});
