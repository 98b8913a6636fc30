// Canvas painter: draws a RenderModel. Purely presentational; all logic
// lives in render.ts so it can be tested without a DOM.

import type { Rect } from "./layout.js";
import type { Effect } from "./protocol.js";
import type { NotesView, RenderModel, StrokeView } from "./render.js";

const TOOL_STYLE: Record<string, { color: string; width: number; alpha: number }> = {
  pen: { color: "#c62828", width: 2.2, alpha: 1 },
  highlighter: { color: "#f9d71c", width: 9, alpha: 0.45 },
};

export interface FlashState {
  effect: Effect;
  until: number;
}

export class Painter {
  private images = new Map<string, HTMLImageElement>();

  constructor(private canvas: HTMLCanvasElement) {}

  private img(url: string): HTMLImageElement | null {
    let image = this.images.get(url);
    if (!image) {
      image = new Image();
      image.src = url;
      this.images.set(url, image);
    }
    return image.complete && image.naturalWidth > 0 ? image : null;
  }

  draw(model: RenderModel, flashes: FlashState[], banner: string | null, now: number): void {
    const ctx = this.canvas.getContext("2d")!;
    const W = this.canvas.width;
    const H = this.canvas.height;
    const px = (r: Rect) => [r.x * W, r.y * H, r.w * W, r.h * H] as const;

    ctx.fillStyle = "#20242b";
    ctx.fillRect(0, 0, W, H);

    // slides panel (live slide drawn translucent over the "hall display")
    {
      const [x, y, w, h] = px(model.slides.rect);
      ctx.fillStyle = "#101318";
      ctx.fillRect(x, y, w, h);
      if (model.slides.image) {
        const image = this.img(model.slides.image);
        if (image) {
          ctx.globalAlpha = model.slides.transparent ? 0.55 : 1.0;
          ctx.drawImage(image, x, y, w, h);
          ctx.globalAlpha = 1.0;
        }
      }
      this.strokes(ctx, model.slides.overlay, x, y, w, h);
      ctx.strokeStyle = model.slides.outOfSync ? "#f5f5f5" : "#d03a2b";
      ctx.lineWidth = 2;
      ctx.strokeRect(x, y, w, h);
    }

    // speaker placeholder
    {
      const [x, y, w, h] = [0.75 * W, 0.06 * H, 0.13 * W, 0.14 * H];
      ctx.fillStyle = "#2d3340";
      ctx.fillRect(x, y, w, h);
      ctx.fillStyle = "#9aa3b2";
      ctx.beginPath();
      ctx.arc(x + w / 2, y + h * 0.38, h * 0.17, 0, Math.PI * 2);
      ctx.fill();
      ctx.beginPath();
      ctx.arc(x + w / 2, y + h * 0.95, h * 0.35, Math.PI, 0);
      ctx.fill();
      ctx.fillStyle = "#777";
      ctx.font = `${0.018 * H}px sans-serif`;
      ctx.fillText("speaker", x + 4, y + h - 4);
    }

    // transcripts panel
    {
      const [x, y, w, h] = px(model.transcripts.rect);
      ctx.fillStyle = "#f7f5ee";
      ctx.fillRect(x, y, w, h);
      ctx.fillStyle = "#222";
      const lineH = 0.016 * H;
      ctx.font = `${lineH}px sans-serif`;
      let ty = y + lineH * 1.4;
      for (const block of model.transcripts.blocks) {
        if (block.displayed) {
          ctx.fillStyle = "#fff3c2";
          const lines = wrap(block.text, 46);
          ctx.fillRect(x + 2, ty - lineH, w - 4, lines.length * lineH * 1.25 + 4);
          ctx.fillStyle = "#222";
        }
        for (const line of wrap(block.text, 46)) {
          ctx.fillText(line, x + 6, ty, w - 12);
          ty += lineH * 1.25;
        }
        ty += lineH * 0.5;
        if (ty > y + h - lineH) break;
      }
      this.strokes(ctx, model.transcripts.overlay, x, y, w, h);
      ctx.strokeStyle = model.transcripts.outOfSync ? "#f5f5f5" : "#d03a2b";
      ctx.lineWidth = 2;
      ctx.strokeRect(x, y, w, h);
    }

    // notes panel and tablet share the same projected view
    this.notesSurface(ctx, px(model.notesPanel.rect), model.notesPanel.view, false, "Notes Panel");
    this.notesSurface(ctx, px(model.tablet.rect), model.tablet.view, model.tablet.dimmed, "tablet");

    // buttons
    for (const b of model.buttons) {
      const [x, y, w, h] = px(b.rect);
      ctx.fillStyle = b.color;
      ctx.fillRect(x, y, w, h);
      if (b.highlighted) {
        ctx.strokeStyle = "#ff9f1c";
        ctx.lineWidth = 2.5;
        ctx.strokeRect(x - 1, y - 1, w + 2, h + 2);
      }
      ctx.fillStyle = "#222";
      ctx.font = `${Math.min(h * 0.5, 0.014 * H)}px sans-serif`;
      ctx.fillText(b.label, x + 2, y + h * 0.65, w - 4);
    }

    // feedback flashes
    for (const flash of flashes) {
      if (flash.until < now) continue;
      const e = flash.effect;
      if (e.effect === "green_check" || e.effect === "green_flash") {
        const rect = e.panel === "slides" ? model.slides.rect : model.transcripts.rect;
        const [x, y, w, h] = px(rect);
        if (e.effect === "green_flash") {
          ctx.fillStyle = "rgba(70, 200, 90, 0.25)";
          ctx.fillRect(x, y, w, h);
        }
        ctx.fillStyle = "#2f9e44";
        ctx.font = `${0.05 * H}px sans-serif`;
        ctx.fillText("✓", x + w - 0.045 * H, y + 0.055 * H);
      } else if (e.effect === "button_flash") {
        const btn = model.buttons.find((b) => b.button === e.button);
        if (btn) {
          const [x, y, w, h] = px(btn.rect);
          ctx.fillStyle = "rgba(255,255,255,0.85)";
          ctx.fillRect(x, y, w, h);
        }
      } else if (e.effect === "panel_highlight" && e.surface && !e.surface.startsWith("button:")) {
        const rect =
          e.surface === "slides"
            ? model.slides.rect
            : e.surface === "transcripts"
              ? model.transcripts.rect
              : model.notesPanel.rect;
        const [x, y, w, h] = px(rect);
        ctx.strokeStyle = "rgba(120, 190, 255, 0.9)";
        ctx.lineWidth = 3;
        ctx.strokeRect(x - 2, y - 2, w + 4, h + 4);
      }
    }

    // cursor
    if (model.cursor) {
      const cx = model.cursor.x * W;
      const cy = model.cursor.y * H;
      ctx.strokeStyle = "#ffffff";
      ctx.fillStyle =
        model.cursor.style === "highlighter"
          ? "#f9d71c"
          : model.cursor.style === "eraser"
            ? "#9aa"
            : model.cursor.style.startsWith("button")
              ? "#ff9f1c"
              : "#c62828";
      ctx.beginPath();
      ctx.arc(cx, cy, model.cursor.style === "button_armed" ? 7 : 5, 0, Math.PI * 2);
      ctx.fill();
      ctx.stroke();
    }

    // status line + banner
    ctx.fillStyle = "#aab";
    ctx.font = `${0.016 * H}px monospace`;
    const t = Math.floor(model.clockMs / 1000);
    ctx.fillText(
      `t=${Math.floor(t / 60)}:${String(t % 60).padStart(2, "0")}  tool=${model.activeTool}`,
      8,
      H - 8,
    );
    if (banner) {
      ctx.fillStyle = "rgba(180, 40, 40, 0.92)";
      ctx.fillRect(0, 0, W, 0.05 * H);
      ctx.fillStyle = "#fff";
      ctx.font = `${0.024 * H}px sans-serif`;
      ctx.fillText(banner, 12, 0.035 * H);
    }
  }

  private notesSurface(
    ctx: CanvasRenderingContext2D,
    [x, y, w, h]: readonly [number, number, number, number],
    view: NotesView,
    dimmed: boolean,
    label: string,
  ): void {
    ctx.fillStyle = "#fcfcf8";
    ctx.fillRect(x, y, w, h);
    ctx.save();
    ctx.beginPath();
    ctx.rect(x, y, w, h);
    ctx.clip();
    for (const cap of view.captures) {
      const cx = x + cap.rect.x * w;
      const cy = y + cap.rect.y * h;
      const cw = cap.rect.w * w;
      const chh = cap.rect.h * h;
      ctx.fillStyle = cap.kind === "slide" ? "#eef0f2" : "#fffdf0";
      ctx.fillRect(cx, cy, cw, chh);
      if (cap.image) {
        const image = this.img(cap.image);
        if (image) ctx.drawImage(image, cx, cy, cw, chh);
      } else if (cap.text) {
        ctx.fillStyle = "#333";
        const lh = Math.max(chh / 7, 9);
        ctx.font = `${lh * 0.8}px sans-serif`;
        wrap(cap.text, 48).slice(0, 6).forEach((line, i) => {
          ctx.fillText(line, cx + 4, cy + lh * (i + 1), cw - 8);
        });
      }
      ctx.strokeStyle = "#99a";
      ctx.lineWidth = 1.2;
      ctx.strokeRect(cx, cy, cw, chh);
      this.strokes(ctx, cap.annotations, cx, cy, cw, chh);
    }
    this.strokes(ctx, view.strokes, x, y, w, h);
    ctx.restore();
    if (dimmed) {
      ctx.fillStyle = "rgba(20, 22, 28, 0.55)";
      ctx.fillRect(x, y, w, h);
    }
    ctx.strokeStyle = "#556";
    ctx.lineWidth = 1.5;
    ctx.strokeRect(x, y, w, h);
    ctx.fillStyle = "#889";
    ctx.font = "11px sans-serif";
    ctx.fillText(label, x + 4, y - 3);
  }

  private strokes(
    ctx: CanvasRenderingContext2D,
    strokes: StrokeView[],
    x: number,
    y: number,
    w: number,
    h: number,
  ): void {
    for (const s of strokes) {
      const style = TOOL_STYLE[s.tool] ?? TOOL_STYLE.pen;
      ctx.strokeStyle = style.color;
      ctx.globalAlpha = style.alpha;
      ctx.lineWidth = style.width;
      ctx.lineCap = "round";
      ctx.lineJoin = "round";
      ctx.beginPath();
      s.points.forEach(([u, v], i) => {
        const px = x + u * w;
        const py = y + v * h;
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      });
      if (s.points.length === 1) {
        const [u, v] = s.points[0];
        ctx.arc(x + u * w, y + v * h, style.width / 2, 0, Math.PI * 2);
      }
      ctx.stroke();
      ctx.globalAlpha = 1;
    }
  }
}

function wrap(text: string, chars: number): string[] {
  const words = text.split(/\s+/);
  const lines: string[] = [];
  let cur = "";
  for (const word of words) {
    const cand = cur ? `${cur} ${word}` : word;
    if (cur && cand.length > chars) {
      lines.push(cur);
      cur = word;
    } else {
      cur = cand;
    }
  }
  if (cur) lines.push(cur);
  return lines;
}
