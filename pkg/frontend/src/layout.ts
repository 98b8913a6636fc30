// Screen layout: the lecture stage (slides + navigator, speaker box,
// transcripts, notes) and the tablet region, all in normalized screen
// coordinates [0,1]². Hitboxes never overlap; every button id has exactly
// one hitbox. Button slot fractions mirror the server's cursor layout.

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface ButtonBox {
  button: string;
  rect: Rect;
}

export const STAGE = {
  slides: { x: 0.03, y: 0.07, w: 0.4, h: 0.38 } as Rect,
  slideStrip: { x: 0.03, y: 0.455, w: 0.4, h: 0.045 } as Rect,
  notes: { x: 0.465, y: 0.07, w: 0.235, h: 0.38 } as Rect,
  notesToolStrip: { x: 0.437, y: 0.07, w: 0.024, h: 0.38 } as Rect,
  notesScrollStrip: { x: 0.704, y: 0.07, w: 0.024, h: 0.38 } as Rect,
  speaker: { x: 0.75, y: 0.06, w: 0.13, h: 0.14 } as Rect,
  transcripts: { x: 0.74, y: 0.22, w: 0.225, h: 0.28 } as Rect,
  transcriptStrip: { x: 0.969, y: 0.22, w: 0.024, h: 0.28 } as Rect,
  tablet: { x: 0.25, y: 0.56, w: 0.5, h: 0.41 } as Rect,
};

const THUMB_SLOTS = 6;

export function contains(r: Rect, x: number, y: number): boolean {
  return x >= r.x && x < r.x + r.w && y >= r.y && y < r.y + r.h;
}

export function local(r: Rect, x: number, y: number): [number, number] {
  return [(x - r.x) / r.w, (y - r.y) / r.h];
}

export function toScreen(r: Rect, u: number, v: number): [number, number] {
  return [r.x + u * r.w, r.y + v * r.h];
}

// Strip subdivision mirrors the engine-side layout: slots with a 6% pad.
function slotRects(strip: Rect, count: number, vertical: boolean): Rect[] {
  const out: Rect[] = [];
  const lo = 0.05;
  const hi = 0.95;
  const span = (hi - lo) / count;
  const pad = span * 0.06;
  for (let i = 0; i < count; i++) {
    const a = lo + i * span + pad;
    const b = lo + (i + 1) * span - pad;
    out.push(
      vertical
        ? { x: strip.x, y: strip.y + a * strip.h, w: strip.w, h: (b - a) * strip.h }
        : { x: strip.x + a * strip.w, y: strip.y, w: (b - a) * strip.w, h: strip.h },
    );
  }
  return out;
}

function slideStripRects(strip: Rect): Rect[] {
  // thumb slots + live button share the strip, newest thumb beside live
  const out: Rect[] = [];
  const slotW = 1.0 / (THUMB_SLOTS + 1);
  const pad = slotW * 0.06;
  for (let i = 0; i < THUMB_SLOTS + 1; i++) {
    const a = i * slotW + pad;
    const b = (i + 1) * slotW - pad;
    out.push({ x: strip.x + a * strip.w, y: strip.y, w: (b - a) * strip.w, h: strip.h });
  }
  return out;
}

/** Buttons visible for the current number of released slide builds. */
export function buttonBoxes(releasedSlides: number): ButtonBox[] {
  const boxes: ButtonBox[] = [];
  const slideSlots = slideStripRects(STAGE.slideStrip);
  const visible = Math.min(THUMB_SLOTS, releasedSlides);
  const base = releasedSlides - visible;
  const start = THUMB_SLOTS - visible;
  for (let j = 0; j < visible; j++) {
    boxes.push({ button: `slide_thumb:${base + j}`, rect: slideSlots[start + j] });
  }
  boxes.push({ button: "slides_live", rect: slideSlots[THUMB_SLOTS] });

  const tr = slotRects(STAGE.transcriptStrip, 3, true);
  boxes.push({ button: "transcripts_scroll_up", rect: tr[0] });
  boxes.push({ button: "transcripts_scroll_down", rect: tr[1] });
  boxes.push({ button: "transcripts_live", rect: tr[2] });

  const ns = slotRects(STAGE.notesScrollStrip, 2, true);
  boxes.push({ button: "notes_scroll_up", rect: ns[0] });
  boxes.push({ button: "notes_scroll_down", rect: ns[1] });

  const tools = slotRects(STAGE.notesToolStrip, 3, true);
  boxes.push({ button: "tool_pen", rect: tools[0] });
  boxes.push({ button: "tool_highlighter", rect: tools[1] });
  boxes.push({ button: "tool_eraser", rect: tools[2] });
  return boxes;
}

export interface Hit {
  surface: string;
  pos: [number, number];
}

/** Map a screen point to the gaze-hittable surface under it, if any. */
export function gazeHit(x: number, y: number, releasedSlides: number): Hit | null {
  for (const box of buttonBoxes(releasedSlides)) {
    if (contains(box.rect, x, y)) {
      return { surface: `button:${box.button}`, pos: local(box.rect, x, y) };
    }
  }
  for (const name of ["slides", "transcripts", "notes"] as const) {
    const rect = STAGE[name];
    if (contains(rect, x, y)) return { surface: name, pos: local(rect, x, y) };
  }
  return null;
}

export function inTablet(x: number, y: number): boolean {
  return contains(STAGE.tablet, x, y);
}

export function tabletLocal(x: number, y: number): [number, number] {
  const [u, v] = local(STAGE.tablet, x, y);
  return [Math.min(Math.max(u, 0), 1), Math.min(Math.max(v, 0), 1)];
}
