// Wire types mirroring docs/protocol.md. The server is authoritative;
// the client sends raw input events and applies ordered deltas.

export const PROTOCOL_VERSION = 1;

export type Role = "headset_sim" | "tablet_sim" | "observer";

export type Surface = string; // "slides" | "transcripts" | "notes" | "tablet" | "button:<id>"

export interface GazeEvent {
  kind: "gaze";
  t_ms: number;
  surface: Surface | null;
  pos: [number, number] | null;
}

export interface PenEvent {
  kind: "pen";
  t_ms: number;
  phase: "away" | "hover" | "contact";
  pos: [number, number] | null;
}

export interface GestureEvent {
  kind: "gesture";
  t_ms: number;
  gesture: "double_tap" | "squeeze";
}

export interface AttentionEvent {
  kind: "attention";
  t_ms: number;
  attention: "direct" | "indirect";
}

export interface ClockEvent {
  kind: "clock";
  t_ms: number;
  to_ms: number;
}

export type InputEvent =
  | GazeEvent
  | PenEvent
  | GestureEvent
  | AttentionEvent
  | ClockEvent;

export interface StrokeRecord {
  type: "stroke";
  stroke_id: string;
  tool: "pen" | "highlighter";
  points: [number, number, number][];
}

export interface CaptureRecord {
  type: "capture";
  capture_id: string;
  kind: "slide" | "transcript";
  snapshot_id: string;
  rect: [number, number, number, number];
  created_ms: number;
  annotations: StrokeRecord[];
}

export type ElementRecord = StrokeRecord | CaptureRecord;

export interface DocumentRecord {
  format: string;
  version: number;
  viewport_top_y: number;
  revision: number;
  elements: ElementRecord[];
}

export interface PanelRecord {
  panel: "slides" | "transcripts";
  live_snapshot: string | null;
  displayed_snapshot: string | null;
  sync: "live" | "out_of_sync";
  overlay: Record<string, StrokeRecord[]>;
  open_capture: Record<string, string>;
  last_overlay_edit_ms: Record<string, number>;
}

export interface StateRecord {
  clock_ms: number;
  document: DocumentRecord;
  slides: PanelRecord;
  transcripts: PanelRecord;
  tools: { active: string; last_drawing: string };
}

export interface UiRecord {
  cursor: { surface: Surface; pos: [number, number]; style: string } | null;
  attention: "direct" | "indirect";
}

export interface Effect {
  effect: "green_check" | "green_flash" | "button_flash" | "panel_highlight";
  panel?: string;
  snapshot_id?: string;
  button?: string;
  surface?: string;
}

export type ChangeOp = Record<string, unknown> & { op: string };

export interface FullStateEnvelope {
  kind: "full_state";
  seq: number;
  step: number;
  payload: { seq: number; state: StateRecord; ui: UiRecord };
}

export interface DeltaEnvelope {
  kind: "delta";
  seq: number;
  step: number;
  t_ms: number;
  effects: Effect[];
  changes: ChangeOp[];
}

export interface AckEnvelope {
  kind: "ack";
  seq: number;
}

export interface ErrorEnvelope {
  kind: "error";
  code: string;
  message: string;
}

export type ServerEnvelope =
  | FullStateEnvelope
  | DeltaEnvelope
  | AckEnvelope
  | ErrorEnvelope;

export function hello(role: Role): string {
  return JSON.stringify({ kind: "hello", role, protocol_version: PROTOCOL_VERSION });
}

export function eventEnvelope(event: InputEvent): string {
  return JSON.stringify({ kind: "event", event });
}

export function resync(): string {
  return JSON.stringify({ kind: "resync" });
}

export function control(action: string): string {
  return JSON.stringify({ kind: "control", action });
}

export interface BundleInfo {
  title: string;
  duration_ms: number;
  slides: {
    id: string;
    t_ms: number;
    image: string;
    slide_index: number;
    build_index: number;
  }[];
  blocks: { block_id: string; start_ms: number; end_ms: number; text: string }[];
}
