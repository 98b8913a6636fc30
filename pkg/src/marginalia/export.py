"""Note document export: canonical structured record and SVG 1.1 rendering.

The structured record is canonical JSON (sorted keys, compact separators),
so export -> import -> export is byte-identical. Field names are documented
in docs/export.md.
"""

from __future__ import annotations

import json
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .ingest import LectureBundle, slide_event_id
from .notes import (
    HIGHLIGHTER_WIDTH,
    PEN_WIDTH,
    SLIDE,
    Capture,
    NoteDocument,
    Stroke,
)

_SCALE = 1000.0  # canvas unit -> SVG user units
_MIN_HEIGHT = 0.75  # one empty viewport worth of canvas

_TOOL_STYLE = {
    "pen": f'stroke="#c62828" stroke-width="{PEN_WIDTH * _SCALE:g}" stroke-opacity="1"',
    "highlighter": (
        f'stroke="#f9d71c" stroke-width="{HIGHLIGHTER_WIDTH * _SCALE:g}" stroke-opacity="0.45"'
    ),
}


def export_structured(doc: NoteDocument) -> bytes:
    return json.dumps(doc.to_record(), sort_keys=True, separators=(",", ":")).encode(
        "utf-8"
    )


def import_structured(data: bytes | str) -> NoteDocument:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return NoteDocument.from_record(json.loads(data))


def _fmt(v: float) -> str:
    return f"{v * _SCALE:.2f}"


def _stroke_svg(stroke: Stroke, to_canvas) -> str:
    style = _TOOL_STYLE.get(stroke.tool, _TOOL_STYLE["pen"])
    pts = [to_canvas(p[0], p[1]) for p in stroke.points]
    if len(pts) == 1:
        x, y = pts[0]
        radius = (PEN_WIDTH if stroke.tool == "pen" else HIGHLIGHTER_WIDTH) / 2
        return (
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radius)}" '
            f'fill="none" {style}/>'
        )
    path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    return (
        f'<polyline points="{path}" fill="none" stroke-linecap="round" '
        f'stroke-linejoin="round" {style}/>'
    )


def _wrap_text(text: str, chars_per_line: int) -> list[str]:
    lines: list[str] = []
    current = ""
    for word in text.split():
        candidate = f"{current} {word}".strip()
        if current and len(candidate) > chars_per_line:
            lines.append(current)
            current = word
        else:
            current = candidate
    if current:
        lines.append(current)
    return lines


def _capture_svg(cap: Capture, bundle: LectureBundle | None) -> list[str]:
    x, y, w, h = cap.rect
    parts = [f'<g data-capture={quoteattr(cap.capture_id)}>']
    fill = "#f4f4f4" if cap.kind == SLIDE else "#fffdf0"
    parts.append(
        f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'fill="{fill}" stroke="#9e9e9e" stroke-width="1.5"/>'
    )
    body_rendered = False
    if bundle is not None:
        if cap.kind == SLIDE:
            ref = _slide_image_ref(cap.snapshot_id, bundle)
            if ref is not None:
                parts.append(
                    f"<image x=\"{_fmt(x)}\" y=\"{_fmt(y)}\" width=\"{_fmt(w)}\" "
                    f"height=\"{_fmt(h)}\" href={quoteattr(ref)} "
                    f'preserveAspectRatio="xMidYMid meet"/>'
                )
                body_rendered = True
        else:
            block = next(
                (b for b in bundle.transcript_blocks if b.block_id == cap.snapshot_id),
                None,
            )
            if block is not None:
                line_h = h / 8
                for i, line in enumerate(_wrap_text(block.text, 58)[:7]):
                    parts.append(
                        f'<text x="{_fmt(x + 0.02)}" y="{_fmt(y + line_h * (i + 1.2))}" '
                        f'font-size="{_fmt(line_h * 0.62)}" font-family="sans-serif" '
                        f'fill="#333">{escape(line)}</text>'
                    )
                body_rendered = True
    if not body_rendered:
        parts.append(
            f'<text x="{_fmt(x + 0.01)}" y="{_fmt(y + 0.03)}" font-size="18" '
            f'font-family="monospace" fill="#777">{escape(cap.snapshot_id)}</text>'
        )

    def to_canvas(u: float, v: float) -> tuple[float, float]:
        return (x + u * w, y + v * h)

    for ann in cap.annotations:
        parts.append(_stroke_svg(ann, to_canvas))
    parts.append("</g>")
    return parts


def _slide_image_ref(snapshot_id: str, bundle: LectureBundle) -> str | None:
    for i, ev in enumerate(bundle.slide_events):
        if slide_event_id(i) == snapshot_id:
            return ev.image_ref
    return None


def export_svg(doc: NoteDocument, bundle: LectureBundle | None = None) -> str:
    """Render the whole canvas as an SVG 1.1 document."""
    height = max(doc.content_frontier() + 0.05, _MIN_HEIGHT)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SCALE:g}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_SCALE:g} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_SCALE:g}" height="{_fmt(height)}" fill="#ffffff"/>',
        '<g id="content">',
    ]
    identity = lambda u, v: (u, v)  # noqa: E731
    for el in doc.elements:
        if isinstance(el, Stroke):
            lines.append(_stroke_svg(el, identity))
        else:
            lines.extend(_capture_svg(el, bundle))
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_exports(
    doc: NoteDocument,
    out_path: str | Path,
    fmt: str,
    bundle: LectureBundle | None = None,
) -> Path:
    out = Path(out_path)
    if fmt == "structured":
        out.write_bytes(export_structured(doc))
    elif fmt == "svg":
        out.write_text(export_svg(doc, bundle), encoding="utf-8")
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return out
