// Client replica: applies full-state snapshots and ordered deltas.
// Holds no authoritative state; every mutation corresponds to a received
// delta op. A sequence gap throws SeqGapError so the caller can resync.

import type {
  CaptureRecord,
  ChangeOp,
  DeltaEnvelope,
  Effect,
  FullStateEnvelope,
  StateRecord,
  StrokeRecord,
  UiRecord,
} from "./protocol.js";

export class SeqGapError extends Error {
  constructor(public expected: number, public got: number) {
    super(`expected delta seq ${expected}, got ${got}`);
  }
}

export class Replica {
  seq: number | null = null;
  step: number | null = null;
  state: StateRecord | null = null;
  ui: UiRecord = { cursor: null, attention: "indirect" };
  effectsLog: Effect[] = [];

  applyFullState(env: FullStateEnvelope): void {
    this.seq = env.seq;
    this.step = env.step;
    this.state = structuredClone(env.payload.state);
    this.ui = structuredClone(env.payload.ui);
  }

  applyDelta(env: DeltaEnvelope): void {
    if (this.state === null) throw new Error("delta before full state");
    if (this.seq !== null && env.seq <= this.seq) return; // stale duplicate
    if (this.seq !== null && env.seq !== this.seq + 1) {
      throw new SeqGapError(this.seq + 1, env.seq);
    }
    for (const change of env.changes) this.applyChange(change);
    this.effectsLog.push(...env.effects);
    this.seq = env.seq;
    this.step = env.step;
  }

  private doc() {
    return this.state!.document;
  }

  private panel(name: string) {
    return name === "slides" ? this.state!.slides : this.state!.transcripts;
  }

  private findCapture(captureId: string): CaptureRecord | null {
    for (const el of this.doc().elements) {
      if (el.type === "capture" && el.capture_id === captureId) return el;
    }
    return null;
  }

  private applyChange(ch: ChangeOp): void {
    switch (ch.op) {
      case "cursor":
        this.ui.cursor = {
          surface: ch.surface as string,
          pos: ch.pos as [number, number],
          style: ch.style as string,
        };
        break;
      case "cursor_hidden":
        this.ui.cursor = null;
        break;
      case "attention":
        this.ui.attention = ch.attention as "direct" | "indirect";
        break;
      case "element_added":
        this.doc().elements.push(structuredClone(ch.element) as never);
        break;
      case "annotation_added": {
        const cap = this.findCapture(ch.capture_id as string);
        if (!cap) throw new Error(`unknown capture ${ch.capture_id}`);
        cap.annotations.push(structuredClone(ch.stroke) as StrokeRecord);
        break;
      }
      case "strokes_removed": {
        const gone = new Set(ch.stroke_ids as string[]);
        const doc = this.doc();
        doc.elements = doc.elements.filter(
          (el) => el.type !== "stroke" || !gone.has(el.stroke_id),
        );
        for (const el of doc.elements) {
          if (el.type === "capture" && el.annotations.length) {
            el.annotations = el.annotations.filter((s) => !gone.has(s.stroke_id));
          }
        }
        break;
      }
      case "viewport":
        this.doc().viewport_top_y = ch.top_y as number;
        break;
      case "revision":
        this.doc().revision = ch.revision as number;
        break;
      case "panel":
        Object.assign(this.panel(ch.panel as string), ch.fields as object);
        break;
      case "overlay_added": {
        const overlay = this.panel(ch.panel as string).overlay;
        const sid = ch.snapshot_id as string;
        (overlay[sid] ??= []).push(structuredClone(ch.stroke) as StrokeRecord);
        break;
      }
      case "overlay_removed": {
        const overlay = this.panel(ch.panel as string).overlay;
        const sid = ch.snapshot_id as string;
        const gone = new Set(ch.stroke_ids as string[]);
        if (overlay[sid]) {
          const kept = overlay[sid].filter((s) => !gone.has(s.stroke_id));
          if (kept.length) overlay[sid] = kept;
          else delete overlay[sid];
        }
        break;
      }
      case "overlay_cleared":
        delete this.panel(ch.panel as string).overlay[ch.snapshot_id as string];
        break;
      case "open_capture": {
        const open = this.panel(ch.panel as string).open_capture;
        const sid = ch.snapshot_id as string;
        if (ch.capture_id === null) delete open[sid];
        else open[sid] = ch.capture_id as string;
        break;
      }
      case "overlay_edit": {
        const edits = this.panel(ch.panel as string).last_overlay_edit_ms;
        const sid = ch.snapshot_id as string;
        if (ch.t_ms === null) delete edits[sid];
        else edits[sid] = ch.t_ms as number;
        break;
      }
      case "tools":
        this.state!.tools = {
          active: ch.active as string,
          last_drawing: ch.last_drawing as string,
        };
        break;
      case "clock":
        this.state!.clock_ms = ch.clock_ms as number;
        break;
      case "error":
        break; // informational only
      default:
        throw new Error(`unknown delta op ${ch.op}`);
    }
  }
}
