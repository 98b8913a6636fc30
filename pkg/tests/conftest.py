from __future__ import annotations

import json
from pathlib import Path

import pytest

from marginalia.ingest import (
    LectureBundle,
    SlideEvent,
    TranscriptBlock,
    load_bundle,
)

REPO_ROOT = Path(__file__).resolve().parents[1]
ASSETS = REPO_ROOT / "assets"
DEMO_BUNDLE_DIR = ASSETS / "demo-lecture"
DEMO_TRACE = ASSETS / "demo-trace.jsonl.gz"
GOLDEN_FILE = ASSETS / "golden.json"


def mem_bundle(
    slides: list[tuple[int, int, int]] | None = None,
    blocks: list[tuple[str, int, int, str]] | None = None,
    duration_ms: int = 60_000,
    title: str = "test lecture",
) -> LectureBundle:
    """In-memory bundle; slides given as (t_ms, slide_index, build_index)."""
    if slides is None:
        slides = [(0, 0, 0), (10_000, 1, 0), (20_000, 2, 0)]
    if blocks is None:
        blocks = [
            ("tb-0001", 0, 5_000, "first block of speech."),
            ("tb-0002", 5_000, 12_000, "second block follows on."),
            ("tb-0003", 12_000, 30_000, "third block closes the sequence."),
        ]
    return LectureBundle(
        title=title,
        duration_ms=duration_ms,
        slide_events=[
            SlideEvent(t_ms=t, image_ref=f"slides/{i:03d}.png", slide_index=si, build_index=bi)
            for i, (t, si, bi) in enumerate(slides)
        ],
        transcript_blocks=[
            TranscriptBlock(block_id=b, start_ms=s, end_ms=e, text=txt)
            for b, s, e, txt in blocks
        ],
    )


def write_disk_bundle(
    root: Path,
    slides: list[tuple[int, int, int]] | None = None,
    srt: str | None = None,
    duration_ms: int = 60_000,
) -> Path:
    """Materialize a small valid bundle directory for loader/CLI tests."""
    if slides is None:
        slides = [(0, 0, 0), (10_000, 1, 0)]
    if srt is None:
        srt = (
            "1\n00:00:00,000 --> 00:00:04,000\nhello from the first cue.\n\n"
            "2\n00:00:04,000 --> 00:00:09,000\nand a second cue arrives.\n"
        )
    root.mkdir(parents=True, exist_ok=True)
    (root / "slides").mkdir(exist_ok=True)
    manifest = {
        "title": "tiny lecture",
        "duration_ms": duration_ms,
        "slides": [
            {"t_ms": t, "image": f"slides/{i:03d}.png", "slide_index": si, "build_index": bi}
            for i, (t, si, bi) in enumerate(slides)
        ],
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    for i in range(len(slides)):
        # 1x1 PNG, enough for existence checks
        (root / "slides" / f"{i:03d}.png").write_bytes(_PNG_1PX)
    (root / "transcript.srt").write_text(srt, encoding="utf-8")
    return root


_PNG_1PX = bytes.fromhex(
    "89504e470d0a1a0a0000000d49484452000000010000000108060000001f15c489"
    "0000000d49444154789c626001000000ffff03000006000557bfabd40000000049454e44ae426082"
)


@pytest.fixture
def tiny_bundle_dir(tmp_path: Path) -> Path:
    return write_disk_bundle(tmp_path / "bundle")


@pytest.fixture(scope="session")
def demo_bundle():
    if not DEMO_BUNDLE_DIR.exists():
        pytest.skip("demo bundle not generated")
    return load_bundle(DEMO_BUNDLE_DIR)
