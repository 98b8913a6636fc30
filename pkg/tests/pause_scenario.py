"""Scripted pause-semantics scenario: the slide-panel and transcript-panel
stories (annotate, lecture moves on, panel retains, squeeze, live button,
history navigation), with panel states captured at each labeled step.

The recorded outcome is frozen in fixtures/pause_scenario.json; the
acceptance suite replays the scenario and compares step by step.
"""

from __future__ import annotations

from marginalia import events as ev
from marginalia.engine import Session
from marginalia.ingest import LectureBundle, SlideEvent, TranscriptBlock
from marginalia.surfaces import button_surface


def scenario_bundle() -> LectureBundle:
    return LectureBundle(
        title="pause scenario",
        duration_ms=60_000,
        slide_events=[
            SlideEvent(0, "slides/000.png", 0, 0),
            SlideEvent(10_000, "slides/001.png", 1, 0),
            SlideEvent(12_000, "slides/002.png", 2, 0),
        ],
        transcript_blocks=[
            TranscriptBlock("tb-0001", 0, 5_000, "first block."),
            TranscriptBlock("tb-0002", 5_000, 11_500, "second block."),
            TranscriptBlock("tb-0003", 12_000, 30_000, "third block."),
        ],
    )


def _draw(session: Session, surface: str, seed=(0.4, 0.4)) -> list[dict]:
    effects = []
    for event in (
        ev.gaze(0, surface, seed),
        ev.pen(0, "hover", (0.5, 0.5)),
        ev.pen(0, "contact", (0.5, 0.5)),
        ev.pen(0, "contact", (0.55, 0.55)),
        ev.pen(0, "hover", (0.55, 0.55)),
        ev.pen(0, "away"),
    ):
        effects.extend(session.handle_event(event).effects)
    return effects


def _press(session: Session, button: str) -> list[dict]:
    effects = []
    for event in (
        ev.gaze(0, button_surface(button), (0.5, 0.5)),
        ev.pen(0, "hover", (0.5, 0.5)),
        ev.pen(0, "contact", (0.5, 0.5)),
        ev.pen(0, "away"),
    ):
        effects.extend(session.handle_event(event).effects)
    return effects


def _squeeze(session: Session, surface: str) -> list[dict]:
    effects = []
    effects.extend(session.handle_event(ev.gaze(0, surface, (0.5, 0.5))).effects)
    effects.extend(session.handle_event(ev.gesture(0, "squeeze")).effects)
    return effects


def _snap(session: Session, story: str, step: str, effects: list[dict]) -> dict:
    def panel(p):
        return {
            "live_snapshot": p.live_snapshot,
            "displayed_snapshot": p.displayed_snapshot,
            "sync": p.sync,
        }

    return {
        "story": story,
        "step": step,
        "clock_ms": session.clock_ms,
        "slides": panel(session.slides),
        "transcripts": panel(session.transcripts),
        "effects": sorted({e["effect"] for e in effects}),
        "captures": len(session.document.captures()),
    }


def run_slide_story() -> list[dict]:
    s = Session(scenario_bundle())
    steps = []
    s.advance_clock(10_500)
    steps.append(_snap(s, "slides", "A:live", []))
    fx = _draw(s, "slides")
    steps.append(_snap(s, "slides", "B:annotate", fx))
    fx = [e for e in s.advance_clock(12_200).effects]
    steps.append(_snap(s, "slides", "C:retained-on-flip", fx))
    fx = _squeeze(s, "slides")
    steps.append(_snap(s, "slides", "D:squeeze-fresh-capture", fx))
    fx = _press(s, "slides_live")
    steps.append(_snap(s, "slides", "E:live-button", fx))
    fx = _press(s, "slide_thumb:0")
    steps.append(_snap(s, "slides", "F:thumbnail-history", fx))
    return steps


def run_transcript_story() -> list[dict]:
    s = Session(scenario_bundle())
    steps = []
    s.advance_clock(5_200)
    steps.append(_snap(s, "transcripts", "A:live", []))
    fx = _draw(s, "transcripts")
    steps.append(_snap(s, "transcripts", "B:annotate", fx))
    s.advance_clock(10_200)
    fx = _draw(s, "transcripts")  # keep annotating; slides flipped independently
    steps.append(_snap(s, "transcripts", "B2:still-annotating", fx))
    fx = [e for e in s.advance_clock(11_700).effects]
    steps.append(_snap(s, "transcripts", "C:retained-on-update", fx))
    fx = [e for e in s.advance_clock(12_300).effects]
    steps.append(_snap(s, "transcripts", "C2:slides-follow-independently", fx))
    fx = _squeeze(s, "transcripts")
    steps.append(_snap(s, "transcripts", "D:squeeze-fresh-capture", fx))
    fx = _press(s, "transcripts_live")
    steps.append(_snap(s, "transcripts", "E:live-button", fx))
    fx = _press(s, "transcripts_scroll_up")
    steps.append(_snap(s, "transcripts", "F:scroll-history", fx))
    return steps


def run_all() -> list[dict]:
    return run_slide_story() + run_transcript_story()
