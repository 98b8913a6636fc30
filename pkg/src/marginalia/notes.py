"""The shared note canvas: free ink, embedded captures, erasing, scrolling.

Coordinates are canvas units: x in [0,1] across the canvas width, y >= 0
growing downward, 1.0 = canvas width. The canvas is vertically unbounded.
Captures sit in a centered column; free strokes may overlap them, captures
never overlap each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PEN = "pen"
HIGHLIGHTER = "highlighter"
ERASER = "eraser"
DRAWING_TOOLS = (PEN, HIGHLIGHTER)

CAPTURE_COLUMN_WIDTH = 0.7
CAPTURE_GAP = 0.03
PEN_WIDTH = 0.004
HIGHLIGHTER_WIDTH = 0.02
ERASER_RADIUS = 0.01

SLIDE = "slide"
TRANSCRIPT = "transcript"


@dataclass
class ToolState:
    """Active tool plus the drawing tool to return to after erasing."""

    active: str = PEN
    last_drawing: str = PEN

    def switch(self, tool: str) -> None:
        self.active = tool
        if tool in DRAWING_TOOLS:
            self.last_drawing = tool


class DocumentError(Exception):
    pass


class RejectEraserStroke(DocumentError):
    pass


class UnknownCapture(DocumentError):
    pass


def _bounds(points: list[tuple[float, float, int]]) -> tuple[float, float, float, float]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (min(xs), min(ys), max(xs), max(ys))


@dataclass
class Stroke:
    stroke_id: str
    tool: str
    points: list[tuple[float, float, int]]
    bounds: tuple[float, float, float, float] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not self.points:
            raise DocumentError("stroke needs at least one point")
        if self.bounds is None:
            self.bounds = _bounds(self.points)

    def to_record(self) -> dict:
        return {
            "type": "stroke",
            "stroke_id": self.stroke_id,
            "tool": self.tool,
            "points": [[p[0], p[1], p[2]] for p in self.points],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Stroke":
        return cls(
            stroke_id=rec["stroke_id"],
            tool=rec["tool"],
            points=[(p[0], p[1], p[2]) for p in rec["points"]],
        )


@dataclass
class Capture:
    capture_id: str
    kind: str  # slide | transcript
    snapshot_id: str
    rect: tuple[float, float, float, float]  # x, y, width, height
    created_ms: int
    annotations: list[Stroke] = field(default_factory=list)

    @property
    def bottom(self) -> float:
        return self.rect[1] + self.rect[3]

    def to_record(self) -> dict:
        return {
            "type": "capture",
            "capture_id": self.capture_id,
            "kind": self.kind,
            "snapshot_id": self.snapshot_id,
            "rect": list(self.rect),
            "created_ms": self.created_ms,
            "annotations": [s.to_record() for s in self.annotations],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Capture":
        return cls(
            capture_id=rec["capture_id"],
            kind=rec["kind"],
            snapshot_id=rec["snapshot_id"],
            rect=tuple(rec["rect"]),
            created_ms=rec["created_ms"],
            annotations=[Stroke.from_record(s) for s in rec["annotations"]],
        )


def _point_segment_dist_sq(
    px: float, py: float, ax: float, ay: float, bx: float, by: float
) -> float:
    dx = bx - ax
    dy = by - ay
    seg_len_sq = dx * dx + dy * dy
    if seg_len_sq <= 0.0:
        ex, ey = px - ax, py - ay
        return ex * ex + ey * ey
    t = ((px - ax) * dx + (py - ay) * dy) / seg_len_sq
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    cx = ax + t * dx
    cy = ay + t * dy
    ex, ey = px - cx, py - cy
    return ex * ex + ey * ey


def polyline_hit(
    path: list[tuple[float, float]],
    points: list[tuple[float, float, int]],
    radius: float,
) -> bool:
    """True when any path point lies within radius of the stroke polyline."""
    r_sq = radius * radius
    if len(points) == 1:
        ax, ay = points[0][0], points[0][1]
        return any(
            _point_segment_dist_sq(px, py, ax, ay, ax, ay) <= r_sq for px, py in path
        )
    for px, py in path:
        for i in range(len(points) - 1):
            ax, ay = points[i][0], points[i][1]
            bx, by = points[i + 1][0], points[i + 1][1]
            if _point_segment_dist_sq(px, py, ax, ay, bx, by) <= r_sq:
                return True
    return False


class NoteDocument:
    """Single-writer note canvas; every mutation bumps the revision by one."""

    def __init__(self) -> None:
        self.elements: list[Stroke | Capture] = []
        self.viewport_top_y = 0.0
        self.revision = 0
        self._stroke_seq = 0
        self._capture_seq = 0
        # High-water mark of everything ever placed: erasing ink never moves
        # the frontier back up, so new captures keep strict chronological
        # stacking below all prior content.
        self._frontier = 0.0

    # -- id allocation ---------------------------------------------------

    def next_stroke_id(self) -> str:
        self._stroke_seq += 1
        return f"st-{self._stroke_seq:06d}"

    def _next_capture_id(self) -> str:
        self._capture_seq += 1
        return f"cap-{self._capture_seq:04d}"

    # -- queries ----------------------------------------------------------

    def content_frontier(self) -> float:
        """Lowest (max y) bottom edge any element has reached; 0 when empty.

        Matches the geometric scan of the current elements except after an
        erase removed the bottom-most ink, where the old mark holds.
        """
        return self._frontier

    def _raise_frontier(self, bottom: float) -> None:
        if bottom > self._frontier:
            self._frontier = bottom

    def captures(self) -> list[Capture]:
        return [el for el in self.elements if isinstance(el, Capture)]

    def free_strokes(self) -> list[Stroke]:
        return [el for el in self.elements if isinstance(el, Stroke)]

    def find_capture(self, capture_id: str) -> Capture | None:
        for el in self.elements:
            if isinstance(el, Capture) and el.capture_id == capture_id:
                return el
        return None

    # -- mutations ---------------------------------------------------------

    def place_capture(
        self,
        kind: str,
        snapshot_id: str,
        aspect_ratio: float,
        created_ms: int,
        column_width: float = CAPTURE_COLUMN_WIDTH,
        gap: float = CAPTURE_GAP,
    ) -> Capture:
        """Append a capture centered in the column, below all existing content."""
        if aspect_ratio <= 0:
            raise DocumentError(f"aspect_ratio must be positive, got {aspect_ratio}")
        x = (1.0 - column_width) / 2.0
        top = self.content_frontier() + gap
        height = column_width / aspect_ratio
        cap = Capture(
            capture_id=self._next_capture_id(),
            kind=kind,
            snapshot_id=snapshot_id,
            rect=(x, top, column_width, height),
            created_ms=created_ms,
        )
        self.elements.append(cap)
        self._raise_frontier(cap.bottom)
        self.revision += 1
        return cap

    def add_free_stroke(self, stroke: Stroke) -> int:
        if stroke.tool not in DRAWING_TOOLS:
            raise RejectEraserStroke(f"tool {stroke.tool!r} cannot draw")
        self.elements.append(stroke)
        self._raise_frontier(stroke.bounds[3])
        self.revision += 1
        return self.revision

    def append_annotation(self, capture_id: str, stroke: Stroke) -> int:
        cap = self.find_capture(capture_id)
        if cap is None:
            raise UnknownCapture(capture_id)
        cap.annotations.append(stroke)
        self.revision += 1
        return self.revision

    def erase_stroke_at(
        self, path: list[tuple[float, float]], radius: float = ERASER_RADIUS
    ) -> list[str]:
        """Remove whole strokes (free or annotation) the path passes near.

        Capture rectangles and base content are never touched. Returns the
        removed stroke ids; the revision bumps only when something went.
        """
        if radius <= 0:
            raise DocumentError(f"radius must be positive, got {radius}")
        removed: list[str] = []
        kept: list[Stroke | Capture] = []
        for el in self.elements:
            if isinstance(el, Stroke) and polyline_hit(path, el.points, radius):
                removed.append(el.stroke_id)
            else:
                kept.append(el)
        for el in kept:
            if not isinstance(el, Capture) or not el.annotations:
                continue
            x0, y0, w, h = el.rect
            surviving = []
            for ann in el.annotations:
                canvas_pts = [(x0 + p[0] * w, y0 + p[1] * h, p[2]) for p in ann.points]
                if polyline_hit(path, canvas_pts, radius):
                    removed.append(ann.stroke_id)
                else:
                    surviving.append(ann)
            el.annotations = surviving
        if removed:
            self.elements = kept
            self.revision += 1
        return removed

    def remove_annotations(self, capture_id: str, stroke_ids: set[str]) -> list[str]:
        """Drop specific annotations from one capture (id-addressed erase)."""
        cap = self.find_capture(capture_id)
        if cap is None:
            raise UnknownCapture(capture_id)
        removed = [s.stroke_id for s in cap.annotations if s.stroke_id in stroke_ids]
        if removed:
            cap.annotations = [s for s in cap.annotations if s.stroke_id not in stroke_ids]
            self.revision += 1
        return removed

    def scroll_to_adjacent_capture(self, direction: str, gap: float = CAPTURE_GAP) -> float:
        """Snap the viewport to the previous/next capture top; no-op at the ends."""
        if direction not in ("prev", "next"):
            raise DocumentError(f"direction must be prev|next, got {direction!r}")
        targets = [cap.rect[1] - gap for cap in self.captures()]
        current = self.viewport_top_y
        if direction == "next":
            below = [t for t in targets if t > current]
            new = min(below) if below else current
        else:
            above = [t for t in targets if t < current]
            new = max(above) if above else current
        if new != current:
            self.viewport_top_y = new
            self.revision += 1
        return self.viewport_top_y

    def set_viewport(self, top_y: float) -> float:
        top_y = max(0.0, top_y)
        if top_y != self.viewport_top_y:
            self.viewport_top_y = top_y
            self.revision += 1
        return self.viewport_top_y

    # -- serialization ------------------------------------------------------

    def to_record(self) -> dict:
        return {
            "format": "marginalia-notes",
            "version": 1,
            "viewport_top_y": self.viewport_top_y,
            "revision": self.revision,
            "elements": [el.to_record() for el in self.elements],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "NoteDocument":
        if rec.get("format") != "marginalia-notes" or rec.get("version") != 1:
            raise DocumentError("unrecognized document record")
        doc = cls()
        doc.viewport_top_y = rec["viewport_top_y"]
        doc.revision = rec["revision"]
        for el_rec in rec["elements"]:
            if el_rec["type"] == "stroke":
                doc.elements.append(Stroke.from_record(el_rec))
            elif el_rec["type"] == "capture":
                doc.elements.append(Capture.from_record(el_rec))
            else:
                raise DocumentError(f"unknown element type {el_rec['type']!r}")
        doc._reset_counters()
        return doc

    def _reset_counters(self) -> None:
        stroke_max = 0
        cap_max = 0
        for el in self.elements:
            if isinstance(el, Stroke):
                stroke_max = max(stroke_max, _id_number(el.stroke_id))
                self._raise_frontier(el.bounds[3])
            else:
                cap_max = max(cap_max, _id_number(el.capture_id))
                self._raise_frontier(el.bottom)
                for ann in el.annotations:
                    stroke_max = max(stroke_max, _id_number(ann.stroke_id))
        self._stroke_seq = stroke_max
        self._capture_seq = cap_max


def _id_number(ident: str) -> int:
    try:
        return int(ident.rsplit("-", 1)[1])
    except (IndexError, ValueError):
        return 0
