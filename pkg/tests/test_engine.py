from __future__ import annotations

import random

import pytest

from marginalia import events as ev
from marginalia.engine import LIVE, OUT_OF_SYNC, Session
from marginalia.ingest import slide_event_id
from marginalia.notes import ERASER, HIGHLIGHTER, PEN
from marginalia.surfaces import button_surface

from conftest import mem_bundle


def draw_on(session, surface, path, seed_pos=(0.4, 0.4), t=0):
    """Gaze-seed a surface, hover, and drag one stroke along path."""
    session.handle_event(ev.gaze(t, surface, seed_pos))
    session.handle_event(ev.pen(t, "hover", (0.5, 0.5)))
    session.handle_event(ev.pen(t, "contact", (0.5, 0.5)))
    x0, y0 = 0.5, 0.5
    sx, sy = seed_pos
    for px, py in path:
        # tablet position that lands the cursor on (px, py) with gain 1
        session.handle_event(ev.pen(t, "contact", (x0 + px - sx, y0 + py - sy)))
    session.handle_event(ev.pen(t, "hover", (0.5, 0.5)))
    session.handle_event(ev.pen(t, "away"))


def press(session, button_id, t=0):
    session.handle_event(ev.gaze(t, button_surface(button_id), (0.5, 0.5)))
    session.handle_event(ev.pen(t, "hover", (0.5, 0.5)))
    session.handle_event(ev.pen(t, "contact", (0.5, 0.5)))
    session.handle_event(ev.pen(t, "away"))


def squeeze_on(session, surface, t=0):
    session.handle_event(ev.gaze(t, surface, (0.5, 0.5)))
    session.handle_event(ev.gesture(t, "squeeze"))


class TestClock:
    def test_initial_release_at_zero(self):
        s = Session(mem_bundle())
        assert s.slides.live_snapshot == slide_event_id(0)
        assert s.slides.displayed_snapshot == slide_event_id(0)
        assert s.slides.sync == LIVE
        assert s.transcripts.displayed_snapshot is None

    def test_release_follows_when_live(self):
        s = Session(mem_bundle())
        s.advance_clock(121_000 // 10)  # 12_100 > second slide at 10_000
        assert s.slides.displayed_snapshot == slide_event_id(1)
        assert s.slides.sync == LIVE

    def test_transcript_release_at_block_end(self):
        s = Session(mem_bundle())
        s.advance_clock(4_999)
        assert s.transcripts.displayed_snapshot is None
        s.advance_clock(5_000)
        assert s.transcripts.displayed_snapshot == "tb-0001"
        assert s.transcripts.sync == LIVE

    def test_clock_regression_rejected(self):
        s = Session(mem_bundle())
        s.advance_clock(5_000)
        result = s.advance_clock(4_000)
        assert result.error is not None and result.error["code"] == "ClockRegression"
        assert s.clock_ms == 5_000

    def test_monotone_clock_same_value_ok(self):
        s = Session(mem_bundle())
        s.advance_clock(5_000)
        result = s.advance_clock(5_000)
        assert result.error is None


class TestPauseSemantics:
    def test_annotation_in_progress_pen_down(self):
        s = Session(mem_bundle())
        s.handle_event(ev.gaze(0, "slides", (0.4, 0.4)))
        s.handle_event(ev.pen(0, "hover", (0.5, 0.5)))
        s.handle_event(ev.pen(0, "contact", (0.5, 0.5)))
        assert s.annotation_in_progress(s.slides)
        assert not s.annotation_in_progress(s.transcripts)

    def test_grace_window(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)])
        assert s.annotation_in_progress(s.slides)  # just edited at clock 0
        s.advance_clock(500)
        assert s.annotation_in_progress(s.slides)
        s.advance_clock(2_000)
        assert not s.annotation_in_progress(s.slides)

    def test_no_edits_never_in_progress(self):
        s = Session(mem_bundle())
        assert not s.annotation_in_progress(s.slides)

    def test_retained_when_annotating_through_release(self):
        s = Session(mem_bundle())
        s.advance_clock(9_500)
        draw_on(s, "slides", [(0.45, 0.45)], t=9_500)
        s.advance_clock(10_500)  # slide 1 releases 1s after the edit, within grace
        assert s.slides.displayed_snapshot == slide_event_id(0)
        assert s.slides.live_snapshot == slide_event_id(1)
        assert s.slides.sync == OUT_OF_SYNC

    def test_panels_pause_independently(self):
        bundle = mem_bundle(
            slides=[(0, 0, 0), (10_000, 1, 0)],
            blocks=[
                ("tb-0001", 0, 5_000, "first."),
                ("tb-0002", 5_000, 6_500, "second."),
            ],
        )
        s = Session(bundle)
        s.advance_clock(5_000)  # tb-0001 live+displayed
        draw_on(s, "transcripts", [(0.3, 0.3)], t=5_000)
        # tb-0002 releases at 6_500, within the 2 s grace of the 5_000 edit;
        # slide 1 releases at 10_000 with no slide annotation anywhere near
        s.advance_clock(10_500)
        assert s.transcripts.displayed_snapshot == "tb-0001"
        assert s.transcripts.sync == OUT_OF_SYNC
        # slides panel had no annotation: follows live
        assert s.slides.displayed_snapshot == slide_event_id(1)
        assert s.slides.sync == LIVE


class TestAnnotateAndCapture:
    def test_first_stroke_creates_capture_with_green_check(self):
        s = Session(mem_bundle())
        s.handle_event(ev.gaze(0, "slides", (0.4, 0.4)))
        s.handle_event(ev.pen(0, "hover", (0.5, 0.5)))
        s.handle_event(ev.pen(0, "contact", (0.5, 0.5)))
        s.handle_event(ev.pen(0, "contact", (0.55, 0.55)))
        result = s.handle_event(ev.pen(0, "hover", (0.55, 0.55)))
        assert {"effect": "green_check", "panel": "slides"} in result.effects
        caps = s.document.captures()
        assert len(caps) == 1
        assert caps[0].snapshot_id == slide_event_id(0)
        assert len(caps[0].annotations) == 1

    def test_more_strokes_join_same_capture(self):
        s = Session(mem_bundle())
        for i in range(4):
            draw_on(s, "slides", [(0.4 + 0.01 * i, 0.4)])
        caps = s.document.captures()
        assert len(caps) == 1
        assert len(caps[0].annotations) == 4
        assert len(s.slides.overlay[slide_event_id(0)]) == 4

    def test_transcript_first_stroke_new_capture(self):
        s = Session(mem_bundle())
        s.advance_clock(5_000)
        draw_on(s, "transcripts", [(0.2, 0.2)], t=5_000)
        caps = s.document.captures()
        assert len(caps) == 1
        assert caps[0].kind == "transcript"
        assert caps[0].snapshot_id == "tb-0001"

    def test_annotation_coords_are_capture_local(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)], seed_pos=(0.4, 0.4))
        ann = s.document.captures()[0].annotations[0]
        assert all(0.0 <= p[0] <= 1.0 and 0.0 <= p[1] <= 1.0 for p in ann.points)
        assert ann.points[0][:2] == (0.4, 0.4)


class TestManualCapture:
    def test_bare_squeeze(self):
        s = Session(mem_bundle())
        s.handle_event(ev.gaze(0, "slides", (0.5, 0.5)))
        result = s.handle_event(ev.gesture(0, "squeeze"))
        assert any(e["effect"] == "green_flash" for e in result.effects)
        caps = s.document.captures()
        assert len(caps) == 1
        assert caps[0].annotations == []

    def test_squeeze_after_annotation_clears_overlay(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)])
        draw_on(s, "slides", [(0.5, 0.5)])
        assert len(s.slides.overlay[slide_event_id(0)]) == 2
        s.handle_event(ev.gaze(0, "slides", (0.5, 0.5)))
        result = s.handle_event(ev.gesture(0, "squeeze"))
        assert any(e["effect"] == "green_flash" for e in result.effects)
        assert slide_event_id(0) not in s.slides.overlay
        assert slide_event_id(0) not in s.slides.open_capture
        caps = s.document.captures()
        assert len(caps) == 2
        assert len(caps[0].annotations) == 2  # prior annotated capture untouched
        assert caps[1].annotations == []

    def test_two_squeezes_two_captures_ordered(self):
        s = Session(mem_bundle())
        squeeze_on(s, "slides")
        squeeze_on(s, "slides")
        caps = s.document.captures()
        assert len(caps) == 2
        assert caps[0].rect[1] < caps[1].rect[1]

    def test_annotation_after_squeeze_opens_new_capture(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)])
        squeeze_on(s, "slides")
        draw_on(s, "slides", [(0.5, 0.5)])
        caps = s.document.captures()
        assert len(caps) == 3  # annotated, bare squeeze, new annotated
        assert len(caps[2].annotations) == 1


class TestButtons:
    def test_live_button_resyncs(self):
        s = Session(mem_bundle())
        s.advance_clock(25_000)  # three slides released
        s.navigate(s.slides, slide_event_id(0))
        assert s.slides.sync == OUT_OF_SYNC
        press(s, "slides_live")
        assert s.slides.displayed_snapshot == slide_event_id(2)
        assert s.slides.sync == LIVE

    def test_latest_thumb_equivalent_to_live(self):
        s = Session(mem_bundle())
        s.advance_clock(25_000)
        s.navigate(s.slides, slide_event_id(0))
        press(s, "slide_thumb:2")
        assert s.slides.sync == LIVE
        assert s.slides.displayed_snapshot == slide_event_id(2)

    def test_transcript_scroll_up_at_earliest_no_change_still_flashes(self):
        s = Session(mem_bundle())
        s.advance_clock(5_000)
        s.handle_event(ev.gaze(0, button_surface("transcripts_scroll_up"), (0.5, 0.5)))
        s.handle_event(ev.pen(0, "hover", (0.5, 0.5)))
        result = s.handle_event(ev.pen(0, "contact", (0.5, 0.5)))
        assert {"effect": "button_flash", "button": "transcripts_scroll_up"} in result.effects
        assert s.transcripts.displayed_snapshot == "tb-0001"

    def test_transcript_scroll_navigates(self):
        s = Session(mem_bundle())
        s.advance_clock(15_000)  # tb-0001, tb-0002 released
        assert s.transcripts.displayed_snapshot == "tb-0002"
        press(s, "transcripts_scroll_up")
        assert s.transcripts.displayed_snapshot == "tb-0001"
        assert s.transcripts.sync == OUT_OF_SYNC
        press(s, "transcripts_scroll_down")
        assert s.transcripts.displayed_snapshot == "tb-0002"
        assert s.transcripts.sync == LIVE

    def test_notes_scroll_buttons(self):
        s = Session(mem_bundle())
        squeeze_on(s, "slides")
        squeeze_on(s, "slides")
        press(s, "notes_scroll_down")
        assert s.document.viewport_top_y > 0.0
        press(s, "notes_scroll_up")
        assert s.document.viewport_top_y == 0.0

    def test_tool_buttons_update_last_drawing(self):
        s = Session(mem_bundle())
        press(s, "tool_highlighter")
        assert s.tools.active == HIGHLIGHTER
        assert s.tools.last_drawing == HIGHLIGHTER
        press(s, "tool_eraser")
        assert s.tools.active == ERASER
        assert s.tools.last_drawing == HIGHLIGHTER

    def test_unknown_button_error(self):
        s = Session(mem_bundle())
        with pytest.raises(Exception):
            s.press_button("no_such_button")


class TestNavigate:
    def test_navigate_to_past_slide(self):
        s = Session(mem_bundle())
        s.advance_clock(25_000)
        s.navigate(s.slides, slide_event_id(1))
        assert s.slides.displayed_snapshot == slide_event_id(1)
        assert s.slides.sync == OUT_OF_SYNC

    def test_navigate_to_live_is_live(self):
        s = Session(mem_bundle())
        s.advance_clock(25_000)
        s.navigate(s.slides, slide_event_id(2))
        assert s.slides.sync == LIVE

    def test_navigate_future_rejected(self):
        s = Session(mem_bundle())
        from marginalia.engine import UnreleasedSnapshot

        with pytest.raises(UnreleasedSnapshot):
            s.navigate(s.slides, slide_event_id(2))

    def test_go_live_leaves_other_panel_alone(self):
        s = Session(mem_bundle())
        s.advance_clock(30_000)
        s.navigate(s.transcripts, "tb-0001")
        before = s.transcripts.to_record()
        s.navigate(s.slides, slide_event_id(0))
        s.go_live(s.slides)
        assert s.transcripts.to_record() == before

    def test_navigate_back_reopens_same_capture(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)])
        cap_id = s.slides.open_capture[slide_event_id(0)]
        s.advance_clock(25_000)
        assert s.slides.displayed_snapshot == slide_event_id(2)
        s.navigate(s.slides, slide_event_id(0))
        draw_on(s, "slides", [(0.55, 0.55)])
        assert len(s.document.find_capture(cap_id).annotations) == 2
        assert len(s.document.captures()) == 1


class TestEraser:
    def test_erase_on_notes_panel(self):
        s = Session(mem_bundle())
        draw_on(s, "notes", [(0.45, 0.45), (0.5, 0.5)])
        assert len(s.document.free_strokes()) == 1
        press(s, "tool_eraser")
        draw_on(s, "notes", [(0.45, 0.45), (0.5, 0.5)])
        assert s.document.free_strokes() == []

    def test_erase_overlay_removes_annotation_both_sides(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)])
        sid = slide_event_id(0)
        cap_id = s.slides.open_capture[sid]
        press(s, "tool_eraser")
        draw_on(s, "slides", [(0.42, 0.42), (0.46, 0.46)])
        assert sid not in s.slides.overlay
        assert s.document.find_capture(cap_id).annotations == []

    def test_notes_eraser_purges_overlay_mirror(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)])
        sid = slide_event_id(0)
        cap = s.document.captures()[0]
        # erase through the annotation from the notes canvas side
        press(s, "tool_eraser")
        x0, y0, w, h = cap.rect
        # annotation point (0.4, 0.4) capture-local -> canvas coords
        cx, cy = x0 + 0.4 * w, y0 + 0.4 * h
        removed = s.document.erase_stroke_at([(cx, cy)], 0.05)
        s._purge_overlay_ids(set(removed))
        assert sid not in s.slides.overlay


class TestDirectInk:
    def test_direct_contact_writes_to_canvas(self):
        s = Session(mem_bundle())
        s.handle_event(ev.attention(0, "direct"))
        s.handle_event(ev.pen(0, "contact", (0.2, 0.2)))
        s.handle_event(ev.pen(0, "contact", (0.4, 0.3)))
        s.handle_event(ev.pen(0, "hover", (0.4, 0.3)))
        strokes = s.document.free_strokes()
        assert len(strokes) == 1
        # mapped through the notes viewport (view height 0.75)
        assert strokes[0].points[0][:2] == (0.2, 0.2 * 0.75)

    def test_same_record_shape_as_panel_ink(self):
        s = Session(mem_bundle())
        s.handle_event(ev.attention(0, "direct"))
        s.handle_event(ev.pen(0, "contact", (0.2, 0.2)))
        s.handle_event(ev.pen(0, "hover", (0.2, 0.2)))
        s.handle_event(ev.attention(0, "indirect"))
        draw_on(s, "notes", [(0.2, 0.2)])
        recs = [st.to_record() for st in s.document.free_strokes()]
        assert recs[0].keys() == recs[1].keys()


class TestIntentDispatchExamples:
    def test_switch_tool_then_double_tap_returns(self):
        s = Session(mem_bundle())
        s.handle_event(ev.gesture(0, "double_tap"))  # pen -> highlighter
        assert s.tools.active == HIGHLIGHTER
        assert s.tools.last_drawing == HIGHLIGHTER
        s.handle_event(ev.gesture(0, "double_tap"))  # highlighter -> pen
        assert s.tools.active == PEN

    def test_end_stroke_on_notes_bumps_revision(self):
        s = Session(mem_bundle())
        rev = s.document.revision
        draw_on(s, "notes", [(0.3, 0.3)])
        assert s.document.revision == rev + 1


class TestDigest:
    def test_identical_sequences_equal_digests(self):
        def run():
            s = Session(mem_bundle())
            draw_on(s, "slides", [(0.45, 0.45), (0.5, 0.42)])
            s.advance_clock(7_000)
            squeeze_on(s, "transcripts")
            press(s, "tool_highlighter")
            draw_on(s, "notes", [(0.2, 0.2), (0.3, 0.25)])
            s.advance_clock(30_000)
            return s

        a, b = run(), run()
        assert a.digest() == b.digest()
        assert a.seq == b.seq

    def test_one_stroke_difference_changes_digest(self):
        a = Session(mem_bundle())
        b = Session(mem_bundle())
        draw_on(a, "slides", [(0.45, 0.45)])
        draw_on(b, "slides", [(0.45, 0.45)])
        draw_on(b, "slides", [(0.46, 0.45)])
        assert a.digest() != b.digest()

    def test_replay_event_log_reproduces_digest(self):
        s = Session(mem_bundle())
        draw_on(s, "slides", [(0.45, 0.45)])
        s.advance_clock(12_000)
        squeeze_on(s, "slides")
        press(s, "transcripts_scroll_up")
        target = s.digest()
        replayed = Session(mem_bundle())
        for _, _, event in s.event_log:
            replayed.handle_event(event)
        assert replayed.digest() == target

    def test_effects_do_not_feed_back(self):
        # discarding effects changes nothing about the state digest
        s1 = Session(mem_bundle())
        s2 = Session(mem_bundle())
        script = []
        rng = random.Random(5)
        for _ in range(50):
            t = rng.randint(0, 30_000)
            script.append(ev.gaze(t, "slides", (rng.random(), rng.random())))
        for e in script:
            s1.handle_event(e)
            _ = s2.handle_event(e).effects  # consumed and dropped
        assert s1.digest() == s2.digest()


class TestPanelIndependence:
    def test_slide_ops_never_touch_transcripts(self):
        s = Session(mem_bundle())
        s.advance_clock(30_000)
        before = s.transcripts.to_record()
        s.navigate(s.slides, slide_event_id(0))
        draw_on(s, "slides", [(0.45, 0.45)])
        squeeze_on(s, "slides")
        s.go_live(s.slides)
        assert s.transcripts.to_record() == before

    def test_transcript_ops_never_touch_slides(self):
        s = Session(mem_bundle())
        s.advance_clock(30_000)
        before = s.slides.to_record()
        s.navigate(s.transcripts, "tb-0001")
        draw_on(s, "transcripts", [(0.45, 0.45)])
        squeeze_on(s, "transcripts")
        s.go_live(s.transcripts)
        assert s.slides.to_record() == before
