#!/usr/bin/env python3
"""Generate the bundled 12-minute demo lecture (slides + transcript).

Deterministic: same seed, same bundle. Output goes to assets/demo-lecture/.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from PIL import Image, ImageDraw

REPO = Path(__file__).resolve().parents[1]
OUT = REPO / "assets" / "demo-lecture"

DURATION_MS = 720_000  # 12 minutes
TITLE = "Clocks and Timekeeping: A Short History"

# (slide_index, build_index, t_ms): one entry per presentation build
SLIDE_PLAN: list[tuple[int, int, int]] = []
_t = 0
_slide_starts = [0, 55, 110, 170, 225, 285, 345, 400, 460, 520, 580, 645]  # seconds
_builds_per_slide = [1, 2, 3, 1, 2, 3, 2, 1, 3, 2, 2, 2]
for _si, (_start, _nb) in enumerate(zip(_slide_starts, _builds_per_slide)):
    for _bi in range(_nb):
        SLIDE_PLAN.append((_si, _bi, (_start + _bi * 16) * 1000))

_PALETTE = [
    (38, 70, 83),
    (42, 94, 108),
    (40, 114, 113),
    (138, 103, 52),
    (188, 108, 37),
    (155, 68, 40),
    (87, 70, 123),
    (58, 90, 64),
    (110, 48, 75),
    (52, 73, 94),
    (100, 80, 60),
    (70, 70, 90),
]

_SUBJECTS = [
    "the sundial", "the water clock", "the hourglass", "the verge escapement",
    "the pendulum", "the balance spring", "the marine chronometer",
    "the quartz oscillator", "the atomic clock", "the astronomical almanac",
    "the equation of time", "the leap second",
]
_VERBS = [
    "divides", "measures", "regulates", "stabilizes", "anticipates",
    "approximates", "standardizes", "reveals", "constrains", "calibrates",
]
_OBJECTS = [
    "the solar day", "local noon", "the sidereal hour", "navigational longitude",
    "the beat of the escapement", "diurnal temperature drift", "railway schedules",
    "the civil calendar", "observatory time signals", "the length of the second",
]
_TAILS = [
    "with remarkable precision", "despite mechanical friction",
    "across entire trade routes", "for astronomers and sailors alike",
    "long before electricity", "using nothing but falling water",
    "through careful compensation", "at the cost of constant maintenance",
    "once the mathematics was settled", "in every port city of the era",
]


def _sentence(rng: random.Random) -> str:
    s = (
        f"{rng.choice(_SUBJECTS)} {rng.choice(_VERBS)} {rng.choice(_OBJECTS)} "
        f"{rng.choice(_TAILS)}"
    )
    return s[0].upper() + s[1:] + rng.choice([".", ".", ".", "?", "!"])


def _timestamp(ms: int) -> str:
    s, mmm = divmod(ms, 1000)
    h, rem = divmod(s, 3600)
    m, sec = divmod(rem, 60)
    return f"{h:02d}:{m:02d}:{sec:02d},{mmm:03d}"


def make_transcript(rng: random.Random) -> str:
    chunks = []
    t = 800
    index = 1
    while t < DURATION_MS - 12_000:
        text = _sentence(rng)
        dur = 320 * len(text.split()) + rng.randint(400, 1_200)
        end = min(t + dur, DURATION_MS - 1_000)
        chunks.append(f"{index}\n{_timestamp(t)} --> {_timestamp(end)}\n{text}\n")
        t = end + rng.randint(200, 900)
        index += 1
    return "\n".join(chunks)


def make_slide_image(slide_index: int, build_index: int) -> Image.Image:
    img = Image.new("RGB", (640, 480), _PALETTE[slide_index % len(_PALETTE)])
    draw = ImageDraw.Draw(img)
    draw.rectangle([0, 0, 640, 64], fill=(24, 32, 38))
    draw.text((16, 22), f"{TITLE}", fill=(235, 235, 225))
    draw.text((16, 90), f"Slide {slide_index + 1}", fill=(245, 245, 235))
    # one content row per revealed build
    for row in range(build_index + 1):
        y = 150 + row * 80
        draw.rectangle([40, y, 72, y + 32], fill=(235, 235, 225))
        draw.text((90, y + 8), f"point {row + 1} of slide {slide_index + 1}", fill=(230, 230, 220))
    draw.text((16, 440), f"build {build_index + 1}", fill=(200, 200, 190))
    return img


def main() -> None:
    rng = random.Random(20_240_101)
    slides_dir = OUT / "slides"
    slides_dir.mkdir(parents=True, exist_ok=True)
    manifest_slides = []
    for si, bi, t_ms in SLIDE_PLAN:
        name = f"slide{si:02d}_b{bi}.png"
        make_slide_image(si, bi).save(slides_dir / name)
        manifest_slides.append(
            {"t_ms": t_ms, "image": f"slides/{name}", "slide_index": si, "build_index": bi}
        )
    manifest = {"title": TITLE, "duration_ms": DURATION_MS, "slides": manifest_slides}
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    (OUT / "transcript.srt").write_text(make_transcript(rng), encoding="utf-8")
    print(f"wrote {OUT} ({len(manifest_slides)} slide builds)")


if __name__ == "__main__":
    main()
