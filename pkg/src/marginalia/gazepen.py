"""The Gaze+Pen interaction machine.

Gaze seeds the cursor while the pen is idle; hovering the pen reveals the
cursor at the seed; pen movement (not gaze) refines it from there; touching
the tablet commits — a stroke on a drawable surface, a press on a button.
Every function here is a pure transition: (state, input) -> (state, intents).

Mode changes always step one level (idle<->hover<->pen_down); a single input
that implies a larger jump is decomposed, and the modes visited are recorded
in ``last_hops`` for the benefit of transition audits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

from .notes import DRAWING_TOOLS, ERASER, HIGHLIGHTER, PEN, ToolState
from .surfaces import (
    CAPTURABLE,
    PANELS,
    TABLET,
    Layout,
    find_exit,
    find_retarget,
    surface_button,
)

IDLE = "idle"
HOVER = "hover"
PEN_DOWN = "pen_down"

DIRECT = "direct"
INDIRECT = "indirect"

PHASE_AWAY = "away"
PHASE_HOVER = "hover"
PHASE_CONTACT = "contact"

DOUBLE_TAP = "double_tap"
SQUEEZE = "squeeze"


class GazeSample(NamedTuple):
    t_ms: int
    hit: tuple[str, tuple[float, float]] | None


class PenSample(NamedTuple):
    t_ms: int
    phase: str
    pos: tuple[float, float] | None


class StartStroke(NamedTuple):
    surface: str
    pos: tuple[float, float]


class ExtendStroke(NamedTuple):
    pos: tuple[float, float]


class EndStroke(NamedTuple):
    pass


class PressButton(NamedTuple):
    button: str


class CaptureUnderCursor(NamedTuple):
    surface: str


class SwitchTool(NamedTuple):
    tool: str


class CursorMoved(NamedTuple):
    surface: str
    pos: tuple[float, float]


class CursorHidden(NamedTuple):
    pass


Intent = (
    StartStroke
    | ExtendStroke
    | EndStroke
    | PressButton
    | CaptureUnderCursor
    | SwitchTool
    | CursorMoved
    | CursorHidden
)


@dataclass(frozen=True)
class FsmConfig:
    gain: float = 1.0  # surface units per tablet unit
    button_snap: float = 0.02  # margin for panel->button cursor hops


@dataclass(frozen=True, slots=True)
class InteractionState:
    mode: str = IDLE
    attention: str = INDIRECT
    cursor_surface: str | None = None
    cursor_pos: tuple[float, float] | None = None
    armed_button: str | None = None
    # Surface a stroke is being drawn on; point assembly lives with the engine.
    stroke_surface: str | None = None
    direct_stroke: bool = False
    gaze_seed: tuple[str, tuple[float, float]] | None = None
    last_pen_pos: tuple[float, float] | None = None
    pen_phase: str = PHASE_AWAY
    last_hops: tuple[str, ...] = (IDLE,)


def on_gaze(
    state: InteractionState, sample: GazeSample
) -> tuple[InteractionState, list[Intent]]:
    """Gaze only seeds the idle cursor; it never moves a revealed cursor."""
    if state.mode == IDLE and sample.hit is not None:
        return replace(state, gaze_seed=sample.hit, last_hops=(IDLE,)), []
    return state, []


def _clamp(v: float) -> float:
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


def on_pen(
    state: InteractionState,
    sample: PenSample,
    layout: Layout,
    cfg: FsmConfig,
) -> tuple[InteractionState, list[Intent]]:
    phase = sample.phase
    pos = sample.pos
    intents: list[Intent] = []

    if state.attention == DIRECT:
        direct = state.direct_stroke
        if phase == PHASE_CONTACT and pos is not None:
            if not direct:
                intents.append(StartStroke(TABLET, pos))
                direct = True
            elif pos != state.last_pen_pos:
                intents.append(ExtendStroke(pos))
        else:
            if direct:
                intents.append(EndStroke())
                direct = False
        new = replace(
            state,
            pen_phase=phase,
            last_pen_pos=pos if phase != PHASE_AWAY else None,
            direct_stroke=direct,
            last_hops=(state.mode,),
        )
        return new, intents

    mode = state.mode
    hops = [mode]
    cursor_s = state.cursor_surface
    cursor_p = state.cursor_pos
    armed = state.armed_button
    stroke_s = state.stroke_surface
    last = state.last_pen_pos

    if phase == PHASE_AWAY:
        if mode == PEN_DOWN:
            if stroke_s is not None:
                intents.append(EndStroke())
                stroke_s = None
            armed = None
            mode = HOVER
            hops.append(mode)
        if mode == HOVER:
            mode = IDLE
            hops.append(mode)
            cursor_s = None
            cursor_p = None
            intents.append(CursorHidden())
        last = None
    else:
        entered = False
        if mode == IDLE and state.gaze_seed is not None:
            cursor_s, cursor_p = state.gaze_seed
            mode = HOVER
            hops.append(mode)
            intents.append(CursorMoved(cursor_s, cursor_p))
            entered = True
        if mode == HOVER:
            if phase == PHASE_CONTACT:
                mode = PEN_DOWN
                hops.append(mode)
                btn = surface_button(cursor_s) if cursor_s else None
                if btn is not None:
                    armed = btn
                    intents.append(PressButton(btn))
                elif cursor_s in PANELS:
                    stroke_s = cursor_s
                    intents.append(StartStroke(cursor_s, cursor_p))
            elif not entered and pos is not None and last is not None and pos != last:
                dx = (pos[0] - last[0]) * cfg.gain
                dy = (pos[1] - last[1]) * cfg.gain
                ux, uy = cursor_p[0] + dx, cursor_p[1] + dy
                btn = surface_button(cursor_s) if cursor_s else None
                if btn is None:
                    clamped = (_clamp(ux), _clamp(uy))
                    hop = find_retarget(layout, cursor_s, clamped, (dx, dy), cfg.button_snap)
                    if hop is not None:
                        cursor_s, cursor_p = hop
                    else:
                        cursor_p = clamped
                else:
                    region = layout.region_of(btn)
                    hop = find_exit(region, (ux, uy)) if region is not None else None
                    if hop is not None:
                        cursor_s, cursor_p = hop
                    else:
                        cursor_p = (_clamp(ux), _clamp(uy))
                intents.append(CursorMoved(cursor_s, cursor_p))
        elif mode == PEN_DOWN:
            if phase == PHASE_HOVER:
                if stroke_s is not None:
                    intents.append(EndStroke())
                    stroke_s = None
                armed = None
                mode = HOVER
                hops.append(mode)
                # Cursor stays where the stroke ended.
            elif stroke_s is not None and pos is not None and last is not None and pos != last:
                dx = (pos[0] - last[0]) * cfg.gain
                dy = (pos[1] - last[1]) * cfg.gain
                cursor_p = (_clamp(cursor_p[0] + dx), _clamp(cursor_p[1] + dy))
                intents.append(ExtendStroke(cursor_p))
        last = pos

    new = InteractionState(
        mode=mode,
        attention=state.attention,
        cursor_surface=cursor_s,
        cursor_pos=cursor_p,
        armed_button=armed,
        stroke_surface=stroke_s,
        direct_stroke=state.direct_stroke,
        gaze_seed=state.gaze_seed,
        last_pen_pos=last,
        pen_phase=phase,
        last_hops=tuple(hops),
    )
    return new, intents


def on_gesture(
    state: InteractionState, gesture: str, tools: ToolState
) -> tuple[InteractionState, list[Intent]]:
    if gesture == DOUBLE_TAP:
        if tools.active == ERASER:
            target = tools.last_drawing
        elif tools.active == PEN:
            target = HIGHLIGHTER
        else:
            target = PEN
        return replace(state, last_hops=(state.mode,)), [SwitchTool(target)]
    if gesture == SQUEEZE:
        if state.attention != INDIRECT or state.mode == PEN_DOWN:
            return state, []
        if state.mode == HOVER:
            surface = state.cursor_surface
        else:
            surface = state.gaze_seed[0] if state.gaze_seed is not None else None
        if surface in CAPTURABLE:
            return replace(state, last_hops=(state.mode,)), [CaptureUnderCursor(surface)]
        return state, []
    return state, []


def set_attention(
    state: InteractionState, attention: str
) -> tuple[InteractionState, list[Intent]]:
    if attention == state.attention:
        return state, []
    intents: list[Intent] = []
    hops = [state.mode]
    if attention == DIRECT:
        if state.stroke_surface is not None:
            intents.append(EndStroke())
        if state.mode == PEN_DOWN:
            hops.append(HOVER)
        if state.cursor_surface is not None:
            intents.append(CursorHidden())
        if hops[-1] != IDLE:
            hops.append(IDLE)
    else:
        if state.direct_stroke:
            intents.append(EndStroke())
    new = InteractionState(
        mode=IDLE,
        attention=attention,
        cursor_surface=None,
        cursor_pos=None,
        armed_button=None,
        stroke_surface=None,
        direct_stroke=False,
        gaze_seed=state.gaze_seed,
        last_pen_pos=state.last_pen_pos,
        pen_phase=state.pen_phase,
        last_hops=tuple(hops),
    )
    return new, intents


def cursor_style(state: InteractionState, tools: ToolState) -> str:
    """Icon identity for the UI: hidden, a tool glyph, or a button state."""
    if state.cursor_surface is None:
        return "hidden"
    if surface_button(state.cursor_surface) is not None:
        return "button_armed" if state.armed_button is not None else "button"
    return tools.active


__all__ = [
    "IDLE",
    "HOVER",
    "PEN_DOWN",
    "DIRECT",
    "INDIRECT",
    "PHASE_AWAY",
    "PHASE_HOVER",
    "PHASE_CONTACT",
    "DOUBLE_TAP",
    "SQUEEZE",
    "GazeSample",
    "PenSample",
    "StartStroke",
    "ExtendStroke",
    "EndStroke",
    "PressButton",
    "CaptureUnderCursor",
    "SwitchTool",
    "CursorMoved",
    "CursorHidden",
    "Intent",
    "FsmConfig",
    "InteractionState",
    "on_gaze",
    "on_pen",
    "on_gesture",
    "set_attention",
    "cursor_style",
    "DRAWING_TOOLS",
]
