// Render model: a pure projection of replica state into screen-space
// drawing instructions. The canvas painter consumes it; tests assert on it.
// Every rendered mutation traces back to a received delta (no prediction).

import { STAGE, buttonBoxes, toScreen, type Rect } from "./layout.js";
import type { BundleInfo, StateRecord, StrokeRecord, UiRecord } from "./protocol.js";

export const NOTES_VIEW_HEIGHT = 0.75; // canvas units visible in the notes viewport

export interface StrokeView {
  id: string;
  tool: string;
  points: [number, number][]; // view-local [0,1]² within the target rect
}

export interface CaptureView {
  id: string;
  kind: string;
  snapshotId: string;
  rect: Rect; // view-local within the notes viewport
  annotations: StrokeView[];
  image: string | null;
  text: string | null;
}

export interface NotesView {
  viewportTop: number;
  strokes: StrokeView[];
  captures: CaptureView[];
}

export interface ButtonView {
  button: string;
  rect: Rect;
  color: string;
  label: string;
  highlighted: boolean;
}

export interface PanelViewBase {
  rect: Rect;
  outOfSync: boolean;
}

export interface SlidesView extends PanelViewBase {
  image: string | null;
  transparent: boolean; // live slide renders see-through over the hall display
  overlay: StrokeView[];
}

export interface TranscriptsView extends PanelViewBase {
  blocks: { blockId: string; text: string; displayed: boolean }[];
  overlay: StrokeView[];
}

export interface RenderModel {
  slides: SlidesView;
  transcripts: TranscriptsView;
  notesPanel: { rect: Rect; view: NotesView };
  tablet: { rect: Rect; view: NotesView; dimmed: boolean };
  buttons: ButtonView[];
  cursor: { x: number; y: number; style: string } | null;
  clockMs: number;
  activeTool: string;
}

function strokeView(s: StrokeRecord): StrokeView {
  return { id: s.stroke_id, tool: s.tool, points: s.points.map((p) => [p[0], p[1]]) };
}

/** Project the note document through its viewport; shared by the Notes
 * Panel and the tablet so the two stay synchronized by construction. */
export function computeNotesView(state: StateRecord, bundle: BundleInfo | null): NotesView {
  const doc = state.document;
  const top = doc.viewport_top_y;
  const h = NOTES_VIEW_HEIGHT;
  const strokes: StrokeView[] = [];
  const captures: CaptureView[] = [];
  for (const el of doc.elements) {
    if (el.type === "stroke") {
      const pts = el.points
        .map((p) => [p[0], (p[1] - top) / h] as [number, number]);
      if (pts.some(([, v]) => v >= -0.05 && v <= 1.05)) {
        strokes.push({ id: el.stroke_id, tool: el.tool, points: pts });
      }
    } else {
      const [x, y, w, hh] = el.rect;
      const vy = (y - top) / h;
      const vh = hh / h;
      if (vy + vh < -0.05 || vy > 1.05) continue;
      captures.push({
        id: el.capture_id,
        kind: el.kind,
        snapshotId: el.snapshot_id,
        rect: { x, y: vy, w, h: vh },
        annotations: el.annotations.map(strokeView),
        image:
          el.kind === "slide" && bundle
            ? bundle.slides.find((s) => s.id === el.snapshot_id)?.image ?? null
            : null,
        text:
          el.kind === "transcript" && bundle
            ? bundle.blocks.find((b) => b.block_id === el.snapshot_id)?.text ?? null
            : null,
      });
    }
  }
  return { viewportTop: top, strokes, captures };
}

const LIVE_RED = "#d03a2b";
const OUT_OF_SYNC_WHITE = "#f5f5f5";

function buttonLabel(button: string): string {
  if (button.startsWith("slide_thumb:")) return button.split(":")[1];
  return {
    slides_live: "LIVE",
    transcripts_live: "LIVE",
    transcripts_scroll_up: "▲",
    transcripts_scroll_down: "▼",
    notes_scroll_up: "▲",
    notes_scroll_down: "▼",
    tool_pen: "pen",
    tool_highlighter: "hl",
    tool_eraser: "er",
  }[button] ?? button;
}

export function buildRenderModel(
  state: StateRecord,
  ui: UiRecord,
  bundle: BundleInfo | null,
  releasedSlides: number,
): RenderModel {
  const slides = state.slides;
  const transcripts = state.transcripts;
  const displayedImage =
    bundle && slides.displayed_snapshot
      ? bundle.slides.find((s) => s.id === slides.displayed_snapshot)?.image ?? null
      : null;

  const blockList: { blockId: string; text: string; displayed: boolean }[] = [];
  if (bundle && transcripts.displayed_snapshot) {
    const idx = bundle.blocks.findIndex(
      (b) => b.block_id === transcripts.displayed_snapshot,
    );
    if (idx >= 0) {
      for (let i = Math.max(0, idx - 3); i <= idx; i++) {
        blockList.push({
          blockId: bundle.blocks[i].block_id,
          text: bundle.blocks[i].text,
          displayed: i === idx,
        });
      }
    }
  }

  const notesView = computeNotesView(state, bundle);

  const buttons: ButtonView[] = buttonBoxes(releasedSlides).map((box) => {
    let color = "#d8d8d8";
    let highlighted = false;
    if (box.button === "slides_live") {
      color = slides.sync === "live" ? LIVE_RED : OUT_OF_SYNC_WHITE;
    } else if (box.button === "transcripts_live") {
      color = transcripts.sync === "live" ? LIVE_RED : OUT_OF_SYNC_WHITE;
    } else if (box.button.startsWith("tool_")) {
      highlighted = box.button === `tool_${state.tools.active}`;
    }
    if (box.button.startsWith("slide_thumb:") && bundle) {
      const n = parseInt(box.button.split(":")[1], 10);
      const id = bundle.slides[n]?.id;
      highlighted = id !== undefined && id === slides.displayed_snapshot;
    }
    if (ui.cursor && ui.cursor.surface === `button:${box.button}`) highlighted = true;
    return { button: box.button, rect: box.rect, color, label: buttonLabel(box.button), highlighted };
  });

  let cursor: RenderModel["cursor"] = null;
  if (ui.cursor) {
    const [cx, cy] = cursorToScreen(ui.cursor.surface, ui.cursor.pos, releasedSlides);
    cursor = { x: cx, y: cy, style: ui.cursor.style };
  }

  return {
    slides: {
      rect: STAGE.slides,
      image: displayedImage,
      transparent: slides.sync === "live",
      outOfSync: slides.sync !== "live",
      overlay: (slides.displayed_snapshot
        ? slides.overlay[slides.displayed_snapshot] ?? []
        : []
      ).map(strokeView),
    },
    transcripts: {
      rect: STAGE.transcripts,
      blocks: blockList,
      outOfSync: transcripts.sync !== "live",
      overlay: (transcripts.displayed_snapshot
        ? transcripts.overlay[transcripts.displayed_snapshot] ?? []
        : []
      ).map(strokeView),
    },
    notesPanel: { rect: STAGE.notes, view: notesView },
    tablet: {
      rect: STAGE.tablet,
      view: notesView,
      dimmed: ui.attention === "indirect",
    },
    buttons,
    cursor,
    clockMs: state.clock_ms,
    activeTool: state.tools.active,
  };
}

function cursorToScreen(
  surface: string,
  pos: [number, number],
  releasedSlides: number,
): [number, number] {
  if (surface.startsWith("button:")) {
    const id = surface.slice(7);
    const box = buttonBoxes(releasedSlides).find((b) => b.button === id);
    if (box) return toScreen(box.rect, pos[0], pos[1]);
    return [0, 0];
  }
  const rect =
    surface === "slides" ? STAGE.slides : surface === "transcripts" ? STAGE.transcripts : STAGE.notes;
  return toScreen(rect, pos[0], pos[1]);
}
