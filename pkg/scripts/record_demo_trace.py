#!/usr/bin/env python3
"""Record the bundled demo trace: a scripted 12-minute note-taking session
at full input rates (30 Hz gaze, 120 Hz pen, 2 Hz clock ticks).

The script drives a synthetic user through annotation, squeezes, history
navigation, tool switches, direct tablet writing, and erasing. Output is a
gzipped trace replayable with `marginalia replay`.
"""

from __future__ import annotations

import gzip
import json
import random
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
import sys

sys.path.insert(0, str(REPO / "src"))

from marginalia.ingest import load_bundle  # noqa: E402
from marginalia.surfaces import button_surface  # noqa: E402
from marginalia.trace import format_trace_line  # noqa: E402

BUNDLE = REPO / "assets" / "demo-lecture"
OUT = REPO / "assets" / "demo-trace.jsonl.gz"

GAZE_HZ = 30.0
PEN_HZ = 120.0
TICK_HZ = 2.0


class Script:
    """Piecewise gaze/pen timelines plus point events, sampled at fixed rates."""

    def __init__(self, duration_ms: int, seed: int) -> None:
        self.duration = duration_ms
        self.rng = random.Random(seed)
        self.t = 0.0
        self.gaze_track: list[tuple[float, tuple | None]] = [(0.0, None)]
        # (t0, t1, phase, p0, p1): pen position interpolates p0 -> p1
        self.pen_track: list[tuple[float, float, str, tuple, tuple]] = []
        self.point_events: list[tuple[float, dict]] = []
        self.pen_pos = (0.5, 0.5)

    # -- authoring ------------------------------------------------------

    def wait(self, ms: float) -> None:
        self.t += ms

    def look(self, surface: str | None, pos: tuple[float, float] = (0.5, 0.5)) -> None:
        hit = None if surface is None else (surface, pos)
        self.gaze_track.append((self.t, hit))

    def pen(self, phase: str, target: tuple[float, float] | None, dur: float) -> None:
        p0 = self.pen_pos
        p1 = target if target is not None else p0
        self.pen_track.append((self.t, self.t + dur, phase, p0, p1))
        self.pen_pos = p1
        self.t += dur

    def hover(self, dur: float = 300.0) -> None:
        self.pen("hover", None, dur)

    def hover_move(self, target: tuple[float, float], dur: float = 300.0) -> None:
        self.pen("hover", target, dur)

    def stroke(self, deltas: list[tuple[float, float]], dur: float = 600.0) -> None:
        """Contact drag visiting pen_pos + each delta, evenly timed."""
        step = dur / max(len(deltas), 1)
        base = self.pen_pos
        for dx, dy in deltas:
            target = (_clip(base[0] + dx), _clip(base[1] + dy))
            self.pen("contact", target, step)

    def tap(self, dur: float = 90.0) -> None:
        self.pen("contact", None, dur)

    def lift(self, hover_ms: float = 120.0) -> None:
        self.pen("hover", None, hover_ms)
        self.pen("away", None, 60.0)

    def gesture(self, name: str) -> None:
        self.point_events.append((self.t, {"kind": "gesture", "t_ms": 0, "gesture": name}))
        self.t += 40.0

    def attention(self, mode: str) -> None:
        self.point_events.append((self.t, {"kind": "attention", "t_ms": 0, "attention": mode}))
        self.t += 30.0

    # -- sampling -------------------------------------------------------

    def _gaze_at(self, t: float) -> tuple | None:
        hit = None
        for start, h in self.gaze_track:
            if start <= t:
                hit = h
            else:
                break
        return hit

    def _pen_at(self, t: float) -> tuple[str, tuple | None]:
        for t0, t1, phase, p0, p1 in self.pen_track:
            if t0 <= t < t1:
                if phase == "away":
                    return "away", None
                f = (t - t0) / (t1 - t0) if t1 > t0 else 1.0
                pos = (p0[0] + (p1[0] - p0[0]) * f, p0[1] + (p1[1] - p0[1]) * f)
                return phase, (round(pos[0], 4), round(pos[1], 4))
        return "away", None

    def render(self) -> list[tuple[float, int, dict]]:
        """All events as (time, tie_priority, record)."""
        out: list[tuple[float, int, dict]] = []
        n_ticks = int(self.duration / 1000 * TICK_HZ)
        for k in range(1, n_ticks + 1):
            t = k * 1000.0 / TICK_HZ
            out.append((t, 0, {"kind": "clock", "t_ms": int(t), "to_ms": int(t)}))
        n_gaze = int(self.duration / 1000 * GAZE_HZ)
        for k in range(n_gaze):
            t = k * 1000.0 / GAZE_HZ
            hit = self._gaze_at(t)
            jitter = self.rng
            if hit is None:
                rec = {"kind": "gaze", "t_ms": int(t), "surface": None, "pos": None}
            else:
                surface, (x, y) = hit
                jx = _clip(x + jitter.uniform(-0.004, 0.004))
                jy = _clip(y + jitter.uniform(-0.004, 0.004))
                rec = {
                    "kind": "gaze",
                    "t_ms": int(t),
                    "surface": surface,
                    "pos": [round(jx, 4), round(jy, 4)],
                }
            out.append((t, 1, rec))
        n_pen = int(self.duration / 1000 * PEN_HZ)
        for k in range(n_pen):
            t = k * 1000.0 / PEN_HZ
            phase, pos = self._pen_at(t)
            rec = {
                "kind": "pen",
                "t_ms": int(t),
                "phase": phase,
                "pos": None if pos is None else [pos[0], pos[1]],
            }
            out.append((t, 2, rec))
        for t, rec in self.point_events:
            rec = dict(rec)
            rec["t_ms"] = int(t)
            out.append((t, 3, rec))
        out.sort(key=lambda item: (item[0], item[1]))
        return out


def _clip(v: float) -> float:
    return min(max(v, 0.0), 1.0)


# ----------------------------------------------------------------------
# high-level user actions


def annotate(s: Script, surface: str, seed: tuple[float, float], n_strokes: int = 1) -> None:
    s.look(surface, seed)
    s.wait(220)
    s.hover(280)
    for _ in range(n_strokes):
        deltas = [
            (s.rng.uniform(-0.06, 0.06), s.rng.uniform(-0.05, 0.05))
            for _ in range(s.rng.randint(2, 5))
        ]
        s.stroke(deltas, dur=s.rng.uniform(350, 800))
        s.pen("hover", None, s.rng.uniform(120, 260))
    s.lift()


def press(s: Script, button: str) -> None:
    s.look(button_surface(button), (0.5, 0.5))
    s.wait(220)
    s.hover(240)
    s.tap()
    s.lift()


def squeeze(s: Script, surface: str, pos: tuple[float, float] = (0.5, 0.5)) -> None:
    s.look(surface, pos)
    s.wait(220)
    s.gesture("squeeze")
    s.wait(140)


def direct_note(s: Script, lines: int = 2) -> None:
    s.attention("direct")
    s.wait(150)
    x, y = 0.15, 0.2
    for _ in range(lines):
        s.pen("hover", (x, y), 120)
        s.pen("contact", (x, y), 30)
        s.stroke([(s.rng.uniform(0.05, 0.12), s.rng.uniform(-0.02, 0.02)) for _ in range(4)], 700)
        s.pen("hover", None, 100)
        y += 0.12
    s.pen("away", None, 60)
    s.attention("indirect")
    s.wait(120)


def main() -> None:
    bundle = load_bundle(BUNDLE)
    s = Script(bundle.duration_ms, seed=271_828)
    slide_times = [e.t_ms for e in bundle.slide_events]
    block_ends = [b.end_ms for b in bundle.transcript_blocks]

    def released_slides(at_ms: float) -> int:
        tick = int(at_ms / 500) * 500
        return sum(1 for t in slide_times if t <= tick)

    def transcripts_ready(at_ms: float) -> bool:
        tick = int(at_ms / 500) * 500
        return any(e <= tick for e in block_ends)

    # opening: watch the lecture for a while
    s.look("slides", (0.5, 0.4))
    s.wait(18_000)

    phase_starts = list(range(20_000, 660_000, 42_000))
    acts = [
        "annotate_slides",
        "squeeze_slides",
        "annotate_transcripts",
        "toolswap_highlight",
        "history_transcripts",
        "direct_note",
        "notes_margin",
        "history_slides",
        "erase_note",
        "squeeze_transcripts",
        "annotate_slides",
        "annotate_both",
        "squeeze_slides",
        "annotate_transcripts",
        "direct_note",
        "annotate_slides",
    ]
    for start, act in zip(phase_starts, acts):
        if s.t < start:
            s.wait(start - s.t)
        if act == "annotate_slides":
            annotate(s, "slides", (s.rng.uniform(0.3, 0.6), s.rng.uniform(0.3, 0.6)), 2)
        elif act == "squeeze_slides":
            squeeze(s, "slides")
        elif act == "annotate_transcripts" and transcripts_ready(s.t):
            annotate(s, "transcripts", (s.rng.uniform(0.2, 0.7), 0.8), 1)
        elif act == "toolswap_highlight":
            s.gesture("double_tap")  # pen -> highlighter
            s.wait(200)
            annotate(s, "slides", (0.45, 0.55), 1)
            s.gesture("double_tap")  # back to pen
            s.wait(150)
        elif act == "history_transcripts" and transcripts_ready(s.t):
            press(s, "transcripts_scroll_up")
            s.wait(2_500)
            annotate(s, "transcripts", (0.4, 0.6), 1)
            s.wait(1_000)
            press(s, "transcripts_live")
        elif act == "direct_note":
            direct_note(s, lines=2)
        elif act == "notes_margin":
            annotate(s, "notes", (0.12, 0.3), 1)
        elif act == "history_slides":
            n = released_slides(s.t)
            if n >= 2:
                press(s, f"slide_thumb:{n - 2}")
                s.wait(2_000)
                annotate(s, "slides", (0.5, 0.5), 1)
                s.wait(800)
                press(s, "slides_live")
        elif act == "erase_note":
            press(s, "tool_eraser")
            s.wait(300)
            annotate(s, "notes", (0.13, 0.31), 1)  # eraser pass over earlier ink
            s.gesture("double_tap")  # back to last drawing tool
            s.wait(200)
        elif act == "squeeze_transcripts" and transcripts_ready(s.t):
            squeeze(s, "transcripts", (0.5, 0.8))
        elif act == "annotate_both":
            annotate(s, "slides", (0.35, 0.4), 1)
            s.wait(500)
            if transcripts_ready(s.t):
                annotate(s, "transcripts", (0.5, 0.75), 1)

    # wind down: watch to the end
    s.look("slides", (0.5, 0.45))
    assert s.t < bundle.duration_ms, f"script overran: {s.t}"

    records = s.render()
    with gzip.open(OUT, "wt", encoding="utf-8") as fh:
        for seq, (t, _, rec) in enumerate(records, start=1):
            fh.write(format_trace_line(seq, int(t), rec))
            fh.write("\n")
    print(f"wrote {OUT} ({len(records)} events)")


if __name__ == "__main__":
    main()
