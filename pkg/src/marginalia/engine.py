"""Authoritative lecture session: virtual clock, panel live/paused logic,
capture semantics, button dispatch, feedback effects, and the append-only
event log.

All inputs (client samples, gestures, clock advances) arrive as event
records through ``handle_event``; each call is one engine step producing
feedback effects and replicable state-change records. Replaying the same
event sequence from a fresh session reproduces the same state digest.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import gazepen as gp
from .ingest import LectureBundle, slide_event_id
from .notes import (
    DRAWING_TOOLS,
    ERASER,
    PEN,
    SLIDE,
    TRANSCRIPT,
    NoteDocument,
    Stroke,
    ToolState,
    polyline_hit,
)
from .surfaces import (
    BTN_NOTES_DOWN,
    BTN_NOTES_UP,
    BTN_SLIDES_LIVE,
    BTN_TOOL_ERASER,
    BTN_TOOL_HIGHLIGHTER,
    BTN_TOOL_PEN,
    BTN_TRANSCRIPTS_DOWN,
    BTN_TRANSCRIPTS_LIVE,
    BTN_TRANSCRIPTS_UP,
    FIXED_BUTTONS,
    NOTES,
    SLIDES,
    TABLET,
    TRANSCRIPTS,
    build_layout,
    thumb_index,
)

LIVE = "live"
OUT_OF_SYNC = "out_of_sync"

_TOOL_BUTTONS = {
    BTN_TOOL_PEN: "pen",
    BTN_TOOL_HIGHLIGHTER: "highlighter",
    BTN_TOOL_ERASER: "eraser",
}


class EngineError(Exception):
    pass


class ClockRegression(EngineError):
    pass


class UnknownButton(EngineError):
    pass


class UnreleasedSnapshot(EngineError):
    pass


class UnknownEvent(EngineError):
    pass


@dataclass
class EngineConfig:
    gain: float = 1.0
    button_snap: float = 0.02
    annotation_grace_ms: int = 2000
    thumb_slots: int = 6
    notes_view_height: float = 0.75  # canvas units visible in the notes viewport
    slide_aspect: float = 4.0 / 3.0
    transcript_aspect: float = 3.2
    eraser_radius: float = 0.01

    def fsm(self) -> gp.FsmConfig:
        return gp.FsmConfig(gain=self.gain, button_snap=self.button_snap)


@dataclass
class PanelState:
    """One spatial panel's live/displayed bookkeeping and its overlay ink."""

    panel: str  # surface id: slides | transcripts
    kind: str  # capture kind: slide | transcript
    live_snapshot: str | None = None
    displayed_snapshot: str | None = None
    sync: str = LIVE
    overlay: dict[str, list[Stroke]] = field(default_factory=dict)
    open_capture: dict[str, str] = field(default_factory=dict)
    last_overlay_edit_ms: dict[str, int] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "panel": self.panel,
            "live_snapshot": self.live_snapshot,
            "displayed_snapshot": self.displayed_snapshot,
            "sync": self.sync,
            "overlay": {
                sid: [s.to_record() for s in strokes]
                for sid, strokes in sorted(self.overlay.items())
                if strokes
            },
            "open_capture": dict(sorted(self.open_capture.items())),
            "last_overlay_edit_ms": dict(sorted(self.last_overlay_edit_ms.items())),
        }


@dataclass
class StepResult:
    seq: int
    effects: list[dict]
    changes: list[dict]
    error: dict | None = None


class Session:
    """Single-writer session engine; one instance per lecture run."""

    def __init__(self, bundle: LectureBundle, config: EngineConfig | None = None) -> None:
        self.cfg = config or EngineConfig()
        self.bundle = bundle
        self.clock_ms = 0
        self.document = NoteDocument()
        self.tools = ToolState()
        self.interaction = gp.InteractionState()
        self.slides = PanelState(panel=SLIDES, kind=SLIDE)
        self.transcripts = PanelState(panel=TRANSCRIPTS, kind=TRANSCRIPT)
        self.event_log: list[tuple[int, int, dict]] = []
        self.seq = 0
        self._released_slides = 0
        self._released_blocks = 0
        self._fsm_cfg = self.cfg.fsm()
        self.layout = build_layout(0, self.cfg.thumb_slots)
        self._stroke_surface: str | None = None
        self._stroke_tool: str = PEN
        self._stroke_points: list[tuple[float, float, int]] = []
        self._last_cursor_surface: str | None = None
        self._effects: list[dict] = []
        self._changes: list[dict] = []
        self._last_sent_revision = 0
        # Anything due at t=0 (the bundle guarantees one slide) is live at start.
        self._advance_clock(0)
        self._effects = []
        self._changes = []

    # ------------------------------------------------------------------
    # event entry point

    def handle_event(self, event: dict) -> StepResult:
        self.seq += 1
        self._effects = []
        self._changes = []
        error = None
        try:
            self._dispatch(event)
        except EngineError as exc:
            error = {"code": type(exc).__name__, "message": str(exc)}
            self._changes.append({"op": "error", **error})
        self._sync_revision()
        self.event_log.append((self.seq, self.clock_ms, event))
        return StepResult(self.seq, self._effects, self._changes, error)

    def _dispatch(self, event: dict) -> None:
        kind = event.get("kind")
        if kind == "pen":
            pos = event.get("pos")
            sample = gp.PenSample(
                t_ms=event.get("t_ms", 0),
                phase=event["phase"],
                pos=tuple(pos) if pos is not None else None,
            )
            state, intents = gp.on_pen(self.interaction, sample, self.layout, self._fsm_cfg)
            self.interaction = state
            self._apply_intents(intents)
        elif kind == "gaze":
            hit = None
            if event.get("surface") is not None:
                hit = (event["surface"], tuple(event["pos"]))
            state, intents = gp.on_gaze(self.interaction, gp.GazeSample(event.get("t_ms", 0), hit))
            self.interaction = state
            self._apply_intents(intents)
        elif kind == "gesture":
            state, intents = gp.on_gesture(self.interaction, event["gesture"], self.tools)
            self.interaction = state
            self._apply_intents(intents)
        elif kind == "attention":
            before = self.interaction.attention
            state, intents = gp.set_attention(self.interaction, event["attention"])
            self.interaction = state
            self._apply_intents(intents)
            if state.attention != before:
                self._changes.append({"op": "attention", "attention": state.attention})
        elif kind == "clock":
            self._advance_clock(int(event["to_ms"]))
        else:
            raise UnknownEvent(f"unknown event kind {kind!r}")

    # ------------------------------------------------------------------
    # clock and releases

    def advance_clock(self, to_ms: int) -> StepResult:
        """Convenience wrapper: advance via a synthetic clock event."""
        return self.handle_event({"kind": "clock", "t_ms": to_ms, "to_ms": to_ms})

    def _advance_clock(self, to_ms: int) -> None:
        if to_ms < self.clock_ms:
            raise ClockRegression(f"clock {self.clock_ms} -> {to_ms}")
        start = self.clock_ms
        due: list[tuple[int, int, PanelState, str]] = []
        events = self.bundle.slide_events
        i = self._released_slides
        while i < len(events) and events[i].t_ms <= to_ms:
            due.append((events[i].t_ms, 0, self.slides, slide_event_id(i)))
            i += 1
        new_released_slides = i
        blocks = self.bundle.transcript_blocks
        j = self._released_blocks
        while j < len(blocks) and blocks[j].end_ms <= to_ms:
            due.append((blocks[j].end_ms, 1, self.transcripts, blocks[j].block_id))
            j += 1
        due.sort(key=lambda item: (item[0], item[1]))
        for t, _, panel, sid in due:
            # Pause checks run at the release moment, not the target time.
            if t > self.clock_ms:
                self.clock_ms = t
            self._release(panel, sid)
        self._released_slides = new_released_slides
        self._released_blocks = j
        if self.clock_ms != to_ms:
            self.clock_ms = to_ms
        if self.clock_ms != start:
            self._changes.append({"op": "clock", "clock_ms": self.clock_ms})
        if due and any(p is self.slides for _, _, p, _ in due):
            self.layout = build_layout(self._released_slides, self.cfg.thumb_slots)

    def _release(self, panel: PanelState, snapshot_id: str) -> None:
        panel.live_snapshot = snapshot_id
        self._panel_change(panel, live_snapshot=snapshot_id)
        if panel.sync == LIVE:
            if self.annotation_in_progress(panel):
                panel.sync = OUT_OF_SYNC
                self._panel_change(panel, sync=OUT_OF_SYNC)
            else:
                panel.displayed_snapshot = snapshot_id
                self._panel_change(panel, displayed_snapshot=snapshot_id)

    def annotation_in_progress(self, panel: PanelState, clock_ms: int | None = None) -> bool:
        """Pen down on this panel, or an overlay edit within the grace window."""
        now = self.clock_ms if clock_ms is None else clock_ms
        if self.interaction.mode == gp.PEN_DOWN and self._stroke_surface == panel.panel:
            return True
        displayed = panel.displayed_snapshot
        if displayed is None:
            return False
        edited = panel.last_overlay_edit_ms.get(displayed)
        return edited is not None and (now - edited) < self.cfg.annotation_grace_ms

    # ------------------------------------------------------------------
    # intent application

    def _apply_intents(self, intents: list) -> None:
        for intent in intents:
            self._apply_intent(intent)

    def _apply_intent(self, intent) -> None:
        kind = type(intent)
        if kind is gp.CursorMoved:
            if intent.surface != self._last_cursor_surface:
                self._last_cursor_surface = intent.surface
                self._effects.append({"effect": "panel_highlight", "surface": intent.surface})
            self._changes.append(
                {
                    "op": "cursor",
                    "surface": intent.surface,
                    "pos": [intent.pos[0], intent.pos[1]],
                    "style": gp.cursor_style(self.interaction, self.tools),
                }
            )
        elif kind is gp.ExtendStroke:
            if self._stroke_surface is not None:
                self._stroke_points.append(
                    (intent.pos[0], intent.pos[1], self.clock_ms)
                )
        elif kind is gp.StartStroke:
            self._stroke_surface = intent.surface
            self._stroke_tool = self.tools.active
            self._stroke_points = [(intent.pos[0], intent.pos[1], self.clock_ms)]
        elif kind is gp.EndStroke:
            self._finish_stroke()
        elif kind is gp.CursorHidden:
            self._last_cursor_surface = None
            self._changes.append({"op": "cursor_hidden"})
        elif kind is gp.PressButton:
            self.press_button(intent.button)
        elif kind is gp.CaptureUnderCursor:
            self.manual_capture(self._panel_by_surface(intent.surface))
        elif kind is gp.SwitchTool:
            self.set_tool(intent.tool)

    def _panel_by_surface(self, surface: str) -> PanelState:
        if surface == SLIDES:
            return self.slides
        if surface == TRANSCRIPTS:
            return self.transcripts
        raise EngineError(f"surface {surface!r} is not a capturable panel")

    # ------------------------------------------------------------------
    # strokes

    def _finish_stroke(self) -> None:
        surface = self._stroke_surface
        if surface is None:
            return
        points = self._stroke_points
        tool = self._stroke_tool
        self._stroke_surface = None
        self._stroke_points = []
        if surface in (NOTES, TABLET):
            top = self.document.viewport_top_y
            h = self.cfg.notes_view_height
            canvas_pts = [(x, top + y * h, t) for x, y, t in points]
            if tool == ERASER:
                removed = self.document.erase_stroke_at(
                    [(p[0], p[1]) for p in canvas_pts], self.cfg.eraser_radius
                )
                if removed:
                    self._changes.append({"op": "strokes_removed", "stroke_ids": removed})
                    self._purge_overlay_ids(set(removed))
            else:
                stroke = Stroke(self.document.next_stroke_id(), tool, canvas_pts)
                self.document.add_free_stroke(stroke)
                self._changes.append({"op": "element_added", "element": stroke.to_record()})
        elif surface in (SLIDES, TRANSCRIPTS):
            panel = self._panel_by_surface(surface)
            if tool == ERASER:
                self._erase_overlay(panel, points)
            else:
                stroke = Stroke(self.document.next_stroke_id(), tool, points)
                self.annotate_snapshot(panel, stroke)

    def annotate_snapshot(self, panel: PanelState, stroke: Stroke) -> None:
        """Overlay ink on the displayed snapshot; first ink opens a capture."""
        displayed = panel.displayed_snapshot
        if displayed is None:
            return
        panel.overlay.setdefault(displayed, []).append(stroke)
        self._changes.append(
            {
                "op": "overlay_added",
                "panel": panel.panel,
                "snapshot_id": displayed,
                "stroke": stroke.to_record(),
            }
        )
        open_id = panel.open_capture.get(displayed)
        if open_id is None:
            cap = self.document.place_capture(
                kind=panel.kind,
                snapshot_id=displayed,
                aspect_ratio=self._aspect_for(panel),
                created_ms=self.clock_ms,
            )
            self._changes.append({"op": "element_added", "element": cap.to_record()})
            panel.open_capture[displayed] = cap.capture_id
            self._changes.append(
                {
                    "op": "open_capture",
                    "panel": panel.panel,
                    "snapshot_id": displayed,
                    "capture_id": cap.capture_id,
                }
            )
            self.document.append_annotation(cap.capture_id, stroke)
            self._changes.append(
                {
                    "op": "annotation_added",
                    "capture_id": cap.capture_id,
                    "stroke": stroke.to_record(),
                }
            )
            self._effects.append({"effect": "green_check", "panel": panel.panel})
        else:
            self.document.append_annotation(open_id, stroke)
            self._changes.append(
                {
                    "op": "annotation_added",
                    "capture_id": open_id,
                    "stroke": stroke.to_record(),
                }
            )
        panel.last_overlay_edit_ms[displayed] = self.clock_ms
        self._changes.append(
            {
                "op": "overlay_edit",
                "panel": panel.panel,
                "snapshot_id": displayed,
                "t_ms": self.clock_ms,
            }
        )

    def _erase_overlay(self, panel: PanelState, path: list[tuple[float, float, int]]) -> None:
        displayed = panel.displayed_snapshot
        if displayed is None:
            return
        strokes = panel.overlay.get(displayed)
        if not strokes:
            return
        path2d = [(p[0], p[1]) for p in path]
        hit = [
            s.stroke_id
            for s in strokes
            if polyline_hit(path2d, s.points, self.cfg.eraser_radius)
        ]
        if not hit:
            return
        hit_set = set(hit)
        panel.overlay[displayed] = [s for s in strokes if s.stroke_id not in hit_set]
        if not panel.overlay[displayed]:
            del panel.overlay[displayed]
        self._changes.append(
            {
                "op": "overlay_removed",
                "panel": panel.panel,
                "snapshot_id": displayed,
                "stroke_ids": hit,
            }
        )
        open_id = panel.open_capture.get(displayed)
        if open_id is not None:
            removed = self.document.remove_annotations(open_id, hit_set)
            if removed:
                self._changes.append({"op": "strokes_removed", "stroke_ids": removed})
        panel.last_overlay_edit_ms[displayed] = self.clock_ms
        self._changes.append(
            {
                "op": "overlay_edit",
                "panel": panel.panel,
                "snapshot_id": displayed,
                "t_ms": self.clock_ms,
            }
        )

    def _purge_overlay_ids(self, removed: set[str]) -> None:
        """Drop overlay mirrors of annotations the canvas eraser removed."""
        for panel in (self.slides, self.transcripts):
            for sid in list(panel.overlay.keys()):
                strokes = panel.overlay[sid]
                hit = [s.stroke_id for s in strokes if s.stroke_id in removed]
                if not hit:
                    continue
                survivors = [s for s in strokes if s.stroke_id not in removed]
                if survivors:
                    panel.overlay[sid] = survivors
                else:
                    del panel.overlay[sid]
                self._changes.append(
                    {
                        "op": "overlay_removed",
                        "panel": panel.panel,
                        "snapshot_id": sid,
                        "stroke_ids": hit,
                    }
                )

    # ------------------------------------------------------------------
    # captures and navigation

    def _aspect_for(self, panel: PanelState) -> float:
        return self.cfg.slide_aspect if panel.kind == SLIDE else self.cfg.transcript_aspect

    def manual_capture(self, panel: PanelState) -> None:
        """Squeeze: bare capture of the displayed snapshot; resets its overlay."""
        displayed = panel.displayed_snapshot
        if displayed is None:
            return
        if panel.overlay.get(displayed):
            del panel.overlay[displayed]
            self._changes.append(
                {"op": "overlay_cleared", "panel": panel.panel, "snapshot_id": displayed}
            )
        if displayed in panel.open_capture:
            del panel.open_capture[displayed]
            self._changes.append(
                {
                    "op": "open_capture",
                    "panel": panel.panel,
                    "snapshot_id": displayed,
                    "capture_id": None,
                }
            )
        if displayed in panel.last_overlay_edit_ms:
            del panel.last_overlay_edit_ms[displayed]
            self._changes.append(
                {
                    "op": "overlay_edit",
                    "panel": panel.panel,
                    "snapshot_id": displayed,
                    "t_ms": None,
                }
            )
        cap = self.document.place_capture(
            kind=panel.kind,
            snapshot_id=displayed,
            aspect_ratio=self._aspect_for(panel),
            created_ms=self.clock_ms,
        )
        self._changes.append({"op": "element_added", "element": cap.to_record()})
        self._effects.append(
            {"effect": "green_flash", "panel": panel.panel, "snapshot_id": displayed}
        )

    def press_button(self, button_id: str) -> None:
        thumb = thumb_index(button_id)
        if button_id not in FIXED_BUTTONS and thumb is None:
            raise UnknownButton(button_id)
        self._effects.append({"effect": "button_flash", "button": button_id})
        if button_id == BTN_SLIDES_LIVE:
            self.go_live(self.slides)
        elif button_id == BTN_TRANSCRIPTS_LIVE:
            self.go_live(self.transcripts)
        elif button_id == BTN_TRANSCRIPTS_UP:
            self._scroll_transcripts(-1)
        elif button_id == BTN_TRANSCRIPTS_DOWN:
            self._scroll_transcripts(+1)
        elif button_id == BTN_NOTES_UP:
            self._scroll_notes("prev")
        elif button_id == BTN_NOTES_DOWN:
            self._scroll_notes("next")
        elif button_id in _TOOL_BUTTONS:
            self.set_tool(_TOOL_BUTTONS[button_id])
        else:
            self.navigate(self.slides, slide_event_id(thumb))

    def _scroll_notes(self, direction: str) -> None:
        before = self.document.viewport_top_y
        after = self.document.scroll_to_adjacent_capture(direction)
        if after != before:
            self._changes.append({"op": "viewport", "top_y": after})

    def _scroll_transcripts(self, delta: int) -> None:
        displayed = self.transcripts.displayed_snapshot
        if displayed is None:
            return
        blocks = self.bundle.transcript_blocks
        idx = next((i for i, b in enumerate(blocks) if b.block_id == displayed), None)
        if idx is None:
            return
        target = idx + delta
        if 0 <= target < self._released_blocks:
            self.navigate(self.transcripts, blocks[target].block_id)

    def navigate(self, panel: PanelState, snapshot_id: str) -> None:
        """Show any released snapshot; leaving the live one goes out of sync."""
        if not self._is_released(panel, snapshot_id):
            raise UnreleasedSnapshot(snapshot_id)
        changed: dict = {}
        if panel.displayed_snapshot != snapshot_id:
            panel.displayed_snapshot = snapshot_id
            changed["displayed_snapshot"] = snapshot_id
        sync = LIVE if snapshot_id == panel.live_snapshot else OUT_OF_SYNC
        if panel.sync != sync:
            panel.sync = sync
            changed["sync"] = sync
        if changed:
            self._panel_change(panel, **changed)

    def go_live(self, panel: PanelState) -> None:
        changed: dict = {}
        if panel.displayed_snapshot != panel.live_snapshot:
            panel.displayed_snapshot = panel.live_snapshot
            changed["displayed_snapshot"] = panel.live_snapshot
        if panel.sync != LIVE:
            panel.sync = LIVE
            changed["sync"] = LIVE
        if changed:
            self._panel_change(panel, **changed)

    def _is_released(self, panel: PanelState, snapshot_id: str) -> bool:
        if panel is self.slides:
            idx = _slide_index(snapshot_id)
            return idx is not None and 0 <= idx < self._released_slides
        blocks = self.bundle.transcript_blocks
        for i in range(self._released_blocks):
            if blocks[i].block_id == snapshot_id:
                return True
        return False

    def set_tool(self, tool: str) -> None:
        if tool not in DRAWING_TOOLS and tool != ERASER:
            raise EngineError(f"unknown tool {tool!r}")
        self.tools.switch(tool)
        self._changes.append(
            {
                "op": "tools",
                "active": self.tools.active,
                "last_drawing": self.tools.last_drawing,
            }
        )

    # ------------------------------------------------------------------
    # bookkeeping

    def _panel_change(self, panel: PanelState, **fields) -> None:
        self._changes.append({"op": "panel", "panel": panel.panel, "fields": fields})

    def _sync_revision(self) -> None:
        if self.document.revision != self._last_sent_revision:
            self._last_sent_revision = self.document.revision
            self._changes.append({"op": "revision", "revision": self.document.revision})

    # ------------------------------------------------------------------
    # state snapshot and digest

    def state_record(self) -> dict:
        return {
            "clock_ms": self.clock_ms,
            "document": self.document.to_record(),
            "slides": self.slides.to_record(),
            "transcripts": self.transcripts.to_record(),
            "tools": {"active": self.tools.active, "last_drawing": self.tools.last_drawing},
        }

    def digest(self) -> str:
        encoded = json.dumps(
            self.state_record(), sort_keys=True, separators=(",", ":")
        ).encode("utf-8")
        return hashlib.sha256(encoded).hexdigest()

    def ui_record(self) -> dict:
        state = self.interaction
        cursor = None
        if state.cursor_surface is not None:
            cursor = {
                "surface": state.cursor_surface,
                "pos": [state.cursor_pos[0], state.cursor_pos[1]],
                "style": gp.cursor_style(state, self.tools),
            }
        return {"cursor": cursor, "attention": state.attention}

    def full_state(self) -> dict:
        return {"seq": self.seq, "state": self.state_record(), "ui": self.ui_record()}


def _slide_index(snapshot_id: str) -> int | None:
    if not snapshot_id.startswith("slide-"):
        return None
    try:
        return int(snapshot_id.split("-", 1)[1])
    except ValueError:
        return None


def state_digest(record: dict) -> str:
    """Digest of a state record; replicas use this to prove convergence."""
    encoded = json.dumps(record, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(encoded).hexdigest()
