"""Surface and button inventory plus the spatial layout the cursor moves in.

Surfaces are string ids: the three spatial panels, the tablet, and buttons
("button:<button_id>"). Buttons hang off panel edges; each region spans a
parameter range along one edge, which is how hover movement crosses from a
panel onto a button and back.
"""

from __future__ import annotations

from dataclasses import dataclass

SLIDES = "slides"
TRANSCRIPTS = "transcripts"
NOTES = "notes"
TABLET = "tablet"

PANELS = (SLIDES, TRANSCRIPTS, NOTES)
CAPTURABLE = (SLIDES, TRANSCRIPTS)

BTN_SLIDES_LIVE = "slides_live"
BTN_TRANSCRIPTS_LIVE = "transcripts_live"
BTN_TRANSCRIPTS_UP = "transcripts_scroll_up"
BTN_TRANSCRIPTS_DOWN = "transcripts_scroll_down"
BTN_NOTES_UP = "notes_scroll_up"
BTN_NOTES_DOWN = "notes_scroll_down"
BTN_TOOL_PEN = "tool_pen"
BTN_TOOL_HIGHLIGHTER = "tool_highlighter"
BTN_TOOL_ERASER = "tool_eraser"

FIXED_BUTTONS = (
    BTN_SLIDES_LIVE,
    BTN_TRANSCRIPTS_LIVE,
    BTN_TRANSCRIPTS_UP,
    BTN_TRANSCRIPTS_DOWN,
    BTN_NOTES_UP,
    BTN_NOTES_DOWN,
    BTN_TOOL_PEN,
    BTN_TOOL_HIGHLIGHTER,
    BTN_TOOL_ERASER,
)

THUMB_SLOTS = 6


def button_surface(button_id: str) -> str:
    return f"button:{button_id}"


def surface_button(surface: str) -> str | None:
    return surface[7:] if surface.startswith("button:") else None


def slide_thumb(index: int) -> str:
    return f"slide_thumb:{index}"


def thumb_index(button_id: str) -> int | None:
    if button_id.startswith("slide_thumb:"):
        try:
            return int(button_id.split(":", 1)[1])
        except ValueError:
            return None
    return None


@dataclass(frozen=True)
class ButtonRegion:
    """A button occupying [lo, hi] along one edge of its owning panel."""

    button: str
    panel: str
    side: str  # "bottom" | "left" | "right" | "top"
    lo: float
    hi: float


def _strip(panel: str, side: str, buttons: list[str], lo: float = 0.05, hi: float = 0.95) -> list[ButtonRegion]:
    span = (hi - lo) / len(buttons)
    pad = span * 0.06
    return [
        ButtonRegion(button=b, panel=panel, side=side, lo=lo + i * span + pad, hi=lo + (i + 1) * span - pad)
        for i, b in enumerate(buttons)
    ]


@dataclass(frozen=True)
class Layout:
    regions: tuple[ButtonRegion, ...]

    def panel_regions(self, panel: str) -> tuple[ButtonRegion, ...]:
        return tuple(r for r in self.regions if r.panel == panel)

    def region_of(self, button_id: str) -> ButtonRegion | None:
        for r in self.regions:
            if r.button == button_id:
                return r
        return None

    def buttons(self) -> tuple[str, ...]:
        return tuple(r.button for r in self.regions)


def build_layout(released_slide_events: int, thumb_slots: int = THUMB_SLOTS) -> Layout:
    """Layout for the current session moment.

    The slide navigator strip along the bottom of the Slides Panel shows the
    most recent released builds (newest rightmost), then the live button.
    """
    regions: list[ButtonRegion] = []
    visible = min(thumb_slots, released_slide_events)
    base = released_slide_events - visible
    slide_strip = [slide_thumb(base + j) for j in range(visible)] + [BTN_SLIDES_LIVE]
    slot_w = 1.0 / (thumb_slots + 1)
    pad = slot_w * 0.06
    # Thumbs occupy the rightmost slots so the newest stays put as old ones scroll off.
    start = thumb_slots - visible
    for j, b in enumerate(slide_strip):
        i = start + j
        regions.append(
            ButtonRegion(button=b, panel=SLIDES, side="bottom", lo=i * slot_w + pad, hi=(i + 1) * slot_w - pad)
        )
    regions += _strip(
        TRANSCRIPTS, "right", [BTN_TRANSCRIPTS_UP, BTN_TRANSCRIPTS_DOWN, BTN_TRANSCRIPTS_LIVE]
    )
    regions += _strip(NOTES, "right", [BTN_NOTES_UP, BTN_NOTES_DOWN])
    regions += _strip(
        NOTES, "left", [BTN_TOOL_PEN, BTN_TOOL_HIGHLIGHTER, BTN_TOOL_ERASER]
    )
    return Layout(regions=tuple(regions))


_OUTWARD = {
    "bottom": (0.0, 1.0),
    "top": (0.0, -1.0),
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
}


def _edge_distance(side: str, x: float, y: float, lo: float, hi: float) -> float:
    """Distance from a point (panel coords) to the shared edge segment."""
    if side in ("bottom", "top"):
        edge_y = 1.0 if side == "bottom" else 0.0
        dx = max(lo - x, 0.0, x - hi)
        dy = abs(y - edge_y)
    else:
        edge_x = 1.0 if side == "right" else 0.0
        dx = abs(x - edge_x)
        dy = max(lo - y, 0.0, y - hi)
    return (dx * dx + dy * dy) ** 0.5


def find_retarget(
    layout: Layout,
    panel: str,
    clamped: tuple[float, float],
    delta: tuple[float, float],
    snap: float,
) -> tuple[str, tuple[float, float]] | None:
    """Panel -> button hop: within the snap margin of a region edge and moving
    outward through it. Returns (button surface, button-local position)."""
    x, y = clamped
    dx, dy = delta
    for region in layout.panel_regions(panel):
        ox, oy = _OUTWARD[region.side]
        if dx * ox + dy * oy <= 0.0:
            continue
        if _edge_distance(region.side, x, y, region.lo, region.hi) > snap:
            continue
        span = region.hi - region.lo
        if region.side in ("bottom", "top"):
            along = min(max((x - region.lo) / span, 0.0), 1.0)
            local = (along, 0.0 if region.side == "bottom" else 1.0)
        else:
            along = min(max((y - region.lo) / span, 0.0), 1.0)
            local = (0.0 if region.side == "right" else 1.0, along)
        return button_surface(region.button), local
    return None


def find_exit(
    region: ButtonRegion, unclamped: tuple[float, float]
) -> tuple[str, tuple[float, float]] | None:
    """Button -> panel hop once movement actually crosses the shared edge."""
    x, y = unclamped
    span = region.hi - region.lo
    if region.side == "bottom" and y < 0.0:
        return region.panel, (region.lo + min(max(x, 0.0), 1.0) * span, 1.0)
    if region.side == "top" and y > 1.0:
        return region.panel, (region.lo + min(max(x, 0.0), 1.0) * span, 0.0)
    if region.side == "right" and x < 0.0:
        return region.panel, (1.0, region.lo + min(max(y, 0.0), 1.0) * span)
    if region.side == "left" and x > 1.0:
        return region.panel, (0.0, region.lo + min(max(y, 0.0), 1.0) * span)
    return None
