// Pointer/keyboard -> protocol events. One pointer stands in for both the
// user's gaze (over the stage) and the pen (inside the tablet region).
//
// Attention: entering the tablet region switches to direct ("looked down")
// unless the heads-up modifier is held or a stylus is hovering, which keeps
// indirect attention for gaze+pen work on the spatial panels.

import { gazeHit, inTablet, tabletLocal } from "./layout.js";
import type { InputEvent } from "./protocol.js";

const GAZE_INTERVAL_MS = 1000 / 30;
const PEN_INTERVAL_MS = 1000 / 120;

export interface MapperOptions {
  gazeJitterSigma?: number; // 0 disables; toggled by the jitter key
  random?: () => number;
}

export class InputMapper {
  private emit: (event: InputEvent) => void;
  private lastGazeAt = -Infinity;
  private lastPenAt = -Infinity;
  private pointer: { x: number; y: number } | null = null;
  private pressed = false;
  private headsUpModifier = false;
  private attention: "direct" | "indirect" = "indirect";
  private penInRegion = false;
  jitterEnabled = false;
  private sigma: number;
  private random: () => number;

  constructor(emit: (event: InputEvent) => void, options: MapperOptions = {}) {
    this.emit = emit;
    this.sigma = options.gazeJitterSigma ?? 0.01;
    this.random = options.random ?? Math.random;
  }

  currentAttention(): "direct" | "indirect" {
    return this.attention;
  }

  pointerMove(x: number, y: number, t: number): void {
    this.pointer = { x, y };
    this.updateRegion(t);
    this.samplePen(t);
    this.sampleGaze(t);
  }

  pointerDown(x: number, y: number, t: number): void {
    this.pointer = { x, y };
    this.pressed = true;
    this.updateRegion(t);
    this.samplePen(t, true);
  }

  pointerUp(x: number, y: number, t: number): void {
    this.pointer = { x, y };
    this.pressed = false;
    this.samplePen(t, true);
  }

  pointerLeave(t: number): void {
    this.pointer = null;
    this.pressed = false;
    this.updateRegion(t);
  }

  keyDown(key: string, t: number): void {
    if (key === "Shift") {
      this.headsUpModifier = true;
    } else if (key === "d") {
      this.emit({ kind: "gesture", t_ms: Math.round(t), gesture: "double_tap" });
    } else if (key === "s") {
      this.emit({ kind: "gesture", t_ms: Math.round(t), gesture: "squeeze" });
    } else if (key === "j") {
      this.jitterEnabled = !this.jitterEnabled;
    }
  }

  keyUp(key: string, t: number): void {
    if (key === "Shift") this.headsUpModifier = false;
  }

  // ------------------------------------------------------------------

  private updateRegion(t: number): void {
    const inside = this.pointer !== null && inTablet(this.pointer.x, this.pointer.y);
    if (inside && !this.penInRegion) {
      this.penInRegion = true;
      if (!this.headsUpModifier && this.attention !== "direct") {
        this.attention = "direct";
        this.emit({ kind: "attention", t_ms: Math.round(t), attention: "direct" });
      }
    } else if (!inside && this.penInRegion) {
      this.penInRegion = false;
      this.emit({ kind: "pen", t_ms: Math.round(t), phase: "away", pos: null });
      this.lastPenAt = t;
      if (this.attention !== "indirect") {
        this.attention = "indirect";
        this.emit({ kind: "attention", t_ms: Math.round(t), attention: "indirect" });
      }
    }
  }

  private samplePen(t: number, force = false): void {
    if (!this.penInRegion || this.pointer === null) return;
    if (!force && t - this.lastPenAt < PEN_INTERVAL_MS) return;
    this.lastPenAt = t;
    const [u, v] = tabletLocal(this.pointer.x, this.pointer.y);
    this.emit({
      kind: "pen",
      t_ms: Math.round(t),
      phase: this.pressed ? "contact" : "hover",
      pos: [round4(u), round4(v)],
    });
  }

  private sampleGaze(t: number): void {
    if (this.pointer === null || this.penInRegion) return;
    if (t - this.lastGazeAt < GAZE_INTERVAL_MS) return;
    this.lastGazeAt = t;
    const hit = gazeHit(this.pointer.x, this.pointer.y, this.releasedSlides);
    if (hit === null) {
      this.emit({ kind: "gaze", t_ms: Math.round(t), surface: null, pos: null });
      return;
    }
    let [u, v] = hit.pos;
    if (this.jitterEnabled && this.sigma > 0) {
      u = clamp01(u + this.gauss() * this.sigma);
      v = clamp01(v + this.gauss() * this.sigma);
    }
    this.emit({
      kind: "gaze",
      t_ms: Math.round(t),
      surface: hit.surface,
      pos: [round4(u), round4(v)],
    });
  }

  private gauss(): number {
    // Box-Muller; good enough for jitter simulation
    const a = Math.max(this.random(), 1e-12);
    const b = this.random();
    return Math.sqrt(-2 * Math.log(a)) * Math.cos(2 * Math.PI * b);
  }

  releasedSlides = 1; // kept current by the app from replica state
}

function clamp01(v: number): number {
  return Math.min(Math.max(v, 0), 1);
}

function round4(v: number): number {
  return Math.round(v * 10_000) / 10_000;
}
