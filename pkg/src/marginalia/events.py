"""Wire/trace event records: the one schema shared by clients, the trace
file, and the replay tool. See docs/protocol.md for the frozen field names.
"""

from __future__ import annotations

from .gazepen import (
    DIRECT,
    DOUBLE_TAP,
    INDIRECT,
    PHASE_AWAY,
    PHASE_CONTACT,
    PHASE_HOVER,
    SQUEEZE,
)
from .surfaces import PANELS, surface_button

EVENT_KINDS = ("gaze", "pen", "gesture", "attention", "clock")

_PHASES = (PHASE_AWAY, PHASE_HOVER, PHASE_CONTACT)
_GESTURES = (DOUBLE_TAP, SQUEEZE)
_ATTENTIONS = (DIRECT, INDIRECT)


class MalformedEvent(Exception):
    pass


def _require_t(event: dict) -> int:
    t = event.get("t_ms")
    if not isinstance(t, int) or isinstance(t, bool) or t < 0:
        raise MalformedEvent(f"t_ms must be a non-negative integer, got {t!r}")
    return t


def _check_pos(pos, name: str = "pos") -> None:
    if (
        not isinstance(pos, (list, tuple))
        or len(pos) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pos)
    ):
        raise MalformedEvent(f"{name} must be [x, y], got {pos!r}")
    if not (0.0 <= pos[0] <= 1.0 and 0.0 <= pos[1] <= 1.0):
        raise MalformedEvent(f"{name} out of [0,1]^2: {pos!r}")


def validate_event(event: dict) -> dict:
    """Check one event record against the wire schema; returns it unchanged."""
    if not isinstance(event, dict):
        raise MalformedEvent(f"event must be an object, got {type(event).__name__}")
    kind = event.get("kind")
    if kind not in EVENT_KINDS:
        raise MalformedEvent(f"unknown event kind {kind!r}")
    _require_t(event)
    if kind == "gaze":
        surface = event.get("surface")
        if surface is None:
            if event.get("pos") is not None:
                raise MalformedEvent("gaze without a surface cannot carry pos")
        else:
            if surface not in PANELS and surface_button(surface) is None:
                raise MalformedEvent(f"gaze surface {surface!r} is not hittable")
            _check_pos(event.get("pos"))
    elif kind == "pen":
        phase = event.get("phase")
        if phase not in _PHASES:
            raise MalformedEvent(f"pen phase {phase!r} invalid")
        pos = event.get("pos")
        if phase == PHASE_AWAY:
            if pos is not None:
                raise MalformedEvent("pen away must not carry pos")
        else:
            _check_pos(pos, "tablet pos")
    elif kind == "gesture":
        if event.get("gesture") not in _GESTURES:
            raise MalformedEvent(f"gesture {event.get('gesture')!r} invalid")
    elif kind == "attention":
        if event.get("attention") not in _ATTENTIONS:
            raise MalformedEvent(f"attention {event.get('attention')!r} invalid")
    elif kind == "clock":
        to_ms = event.get("to_ms")
        if not isinstance(to_ms, int) or isinstance(to_ms, bool) or to_ms < 0:
            raise MalformedEvent(f"clock to_ms must be a non-negative integer, got {to_ms!r}")
    return event


def gaze(t_ms: int, surface: str | None = None, pos: tuple[float, float] | None = None) -> dict:
    if surface is None:
        return {"kind": "gaze", "t_ms": t_ms, "surface": None, "pos": None}
    return {"kind": "gaze", "t_ms": t_ms, "surface": surface, "pos": [pos[0], pos[1]]}


def pen(t_ms: int, phase: str, pos: tuple[float, float] | None = None) -> dict:
    return {
        "kind": "pen",
        "t_ms": t_ms,
        "phase": phase,
        "pos": None if pos is None else [pos[0], pos[1]],
    }


def gesture(t_ms: int, name: str) -> dict:
    return {"kind": "gesture", "t_ms": t_ms, "gesture": name}


def attention(t_ms: int, mode: str) -> dict:
    return {"kind": "attention", "t_ms": t_ms, "attention": mode}


def clock(to_ms: int) -> dict:
    return {"kind": "clock", "t_ms": to_ms, "to_ms": to_ms}
