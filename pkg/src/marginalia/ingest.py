"""Lecture bundle loading: subtitle parsing, transcript blocking, validation.

A bundle directory holds ``manifest.json``, ``slides/*.png`` and
``transcript.srt``. Loading turns it into the timeline the session engine
consumes: ordered slide-build events plus transcript text blocks.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_MAX_BLOCK_CHARS = 280

_SENTENCE_TERMINATORS = (".", "?", "!")

_TIMECODE_RE = re.compile(
    r"^(\d{2}):(\d{2}):(\d{2}),(\d{3})\s*-->\s*(\d{2}):(\d{2}):(\d{2}),(\d{3})$"
)


class IngestError(Exception):
    pass


class MalformedCue(IngestError):
    def __init__(self, line_no: int, reason: str) -> None:
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class NonMonotonicCue(IngestError):
    def __init__(self, index: int) -> None:
        super().__init__(f"cue {index} starts before its predecessor")
        self.index = index


class BundleInvalid(IngestError):
    def __init__(self, reason: str, findings: tuple[Finding, ...] = ()) -> None:
        super().__init__(reason)
        self.reason = reason
        self.findings = findings


@dataclass(frozen=True)
class Finding:
    """One validation violation with a machine-readable code."""

    code: str
    subjects: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.code}({', '.join(self.subjects)}): {self.message}"


@dataclass(frozen=True)
class TranscriptCue:
    start_ms: int
    end_ms: int
    text: str


@dataclass(frozen=True)
class TranscriptBlock:
    block_id: str
    start_ms: int
    end_ms: int
    text: str


@dataclass(frozen=True)
class SlideEvent:
    t_ms: int
    image_ref: str
    slide_index: int
    build_index: int


@dataclass
class LectureBundle:
    title: str
    duration_ms: int
    slide_events: list[SlideEvent]
    transcript_blocks: list[TranscriptBlock]
    # Directory the image_refs resolve against; None skips asset checks.
    root: Path | None = field(default=None, compare=False)


def slide_event_id(index: int) -> str:
    """Stable snapshot id for the slide event at the given bundle position."""
    return f"slide-{index:04d}"


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


def _parse_timestamp_ms(groups: tuple[str, ...]) -> int:
    hh, mm, ss, mmm = (int(g) for g in groups)
    return ((hh * 60 + mm) * 60 + ss) * 1000 + mmm


def parse_transcript_cues(raw: str) -> list[TranscriptCue]:
    """Parse an SRT-subset stream into time-ordered cues.

    Grammar per entry: numeric index line, ``HH:MM:SS,mmm --> HH:MM:SS,mmm``,
    one or more text lines, blank-line separator. Text is whitespace
    normalized. Raises MalformedCue / NonMonotonicCue on violations.
    """
    lines = raw.split("\n")
    cues: list[TranscriptCue] = []
    i = 0
    n = len(lines)
    while True:
        while i < n and not lines[i].strip():
            i += 1
        if i >= n:
            break
        index_line = lines[i].strip().lstrip("﻿")
        if not index_line.isdigit():
            raise MalformedCue(i + 1, f"expected numeric index, got {index_line!r}")
        i += 1
        if i >= n or not lines[i].strip():
            raise MalformedCue(i, "entry truncated before timecode")
        m = _TIMECODE_RE.match(lines[i].strip())
        if m is None:
            raise MalformedCue(i + 1, f"bad timecode {lines[i].strip()!r}")
        start_ms = _parse_timestamp_ms(m.groups()[0:4])
        end_ms = _parse_timestamp_ms(m.groups()[4:8])
        if end_ms <= start_ms:
            raise MalformedCue(i + 1, "cue end not after start")
        i += 1
        text_lines: list[str] = []
        while i < n and lines[i].strip():
            text_lines.append(lines[i])
            i += 1
        text = _normalize_ws(" ".join(text_lines))
        if not text:
            raise MalformedCue(i, "cue has no text")
        if cues and start_ms < cues[-1].start_ms:
            raise NonMonotonicCue(len(cues))
        cues.append(TranscriptCue(start_ms=start_ms, end_ms=end_ms, text=text))
    return cues


def serialize_cues(cues: list[TranscriptCue]) -> str:
    """Render cues back to the SRT subset (round-trip partner of the parser)."""

    def fmt(ms: int) -> str:
        s, mmm = divmod(ms, 1000)
        h, rem = divmod(s, 3600)
        m, sec = divmod(rem, 60)
        return f"{h:02d}:{m:02d}:{sec:02d},{mmm:03d}"

    chunks = [
        f"{i + 1}\n{fmt(c.start_ms)} --> {fmt(c.end_ms)}\n{c.text}\n"
        for i, c in enumerate(cues)
    ]
    return "\n".join(chunks)


@dataclass(frozen=True)
class _Word:
    text: str
    start_ms: float
    end_ms: float


def _cue_words(cue: TranscriptCue) -> list[_Word]:
    # Word times interpolate the cue span by character position so that a cue
    # split across blocks still yields ordered, non-overlapping block spans.
    words = cue.text.split()
    total = len(cue.text)
    dur = cue.end_ms - cue.start_ms
    out = []
    pos = 0
    for w in words:
        a = pos
        b = pos + len(w)
        out.append(
            _Word(
                text=w,
                start_ms=cue.start_ms + dur * (a / total),
                end_ms=cue.start_ms + dur * (b / total),
            )
        )
        pos = b + 1
    return out


def segment_blocks(
    cues: list[TranscriptCue], max_block_chars: int = DEFAULT_MAX_BLOCK_CHARS
) -> list[TranscriptBlock]:
    """Greedily accumulate cue text into display blocks.

    A block closes at the first sentence terminator once it has reached
    max_block_chars/2, or is force-closed (on a word boundary) rather than
    exceed max_block_chars. Words longer than max_block_chars are hard-split.
    """
    if max_block_chars < 40:
        raise ValueError(f"max_block_chars must be >= 40, got {max_block_chars}")
    words: list[_Word] = []
    for cue in cues:
        for w in _cue_words(cue):
            if len(w.text) > max_block_chars:
                # Hard-split an overlong word, dividing its time span evenly.
                span = w.end_ms - w.start_ms
                pieces = [
                    w.text[i : i + max_block_chars]
                    for i in range(0, len(w.text), max_block_chars)
                ]
                frac = 0.0
                for piece in pieces:
                    step = span * (len(piece) / len(w.text))
                    words.append(_Word(piece, w.start_ms + frac, w.start_ms + frac + step))
                    frac += step
            else:
                words.append(w)

    blocks: list[TranscriptBlock] = []
    spans: list[tuple[float, float]] = []
    texts: list[str] = []
    current: list[_Word] = []
    current_len = 0

    def close() -> None:
        nonlocal current, current_len
        if not current:
            return
        texts.append(" ".join(w.text for w in current))
        spans.append((current[0].start_ms, current[-1].end_ms))
        current = []
        current_len = 0

    half = max_block_chars / 2
    for w in words:
        candidate = current_len + len(w.text) + (1 if current else 0)
        if current and candidate > max_block_chars:
            close()
            candidate = len(w.text)
        current.append(w)
        current_len = candidate
        if w.text[-1] in _SENTENCE_TERMINATORS and current_len >= half:
            close()
    close()

    prev_end = 0.0
    for i, ((raw_s, raw_e), text) in enumerate(zip(spans, texts)):
        s = max(raw_s, prev_end)
        e = max(raw_e, s)
        prev_end = e
        blocks.append(
            TranscriptBlock(
                block_id=f"tb-{i + 1:04d}",
                start_ms=int(round(s)),
                end_ms=int(round(e)),
                text=text,
            )
        )
    return blocks


def load_bundle(
    path: str | Path, max_block_chars: int = DEFAULT_MAX_BLOCK_CHARS
) -> LectureBundle:
    """Load and fully validate a lecture bundle directory."""
    root = Path(path)
    manifest_path = root / "manifest.json"
    transcript_path = root / "transcript.srt"
    if not root.is_dir():
        raise BundleInvalid(f"not a directory: {root}")
    if not manifest_path.is_file():
        raise BundleInvalid("missing manifest.json")
    if not transcript_path.is_file():
        raise BundleInvalid("missing transcript.srt")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleInvalid(f"manifest.json is not valid JSON: {exc}") from exc

    try:
        title = str(manifest["title"])
        duration_ms = int(manifest["duration_ms"])
        slides_raw = manifest["slides"]
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleInvalid(f"manifest.json missing or malformed field: {exc}") from exc

    slide_events = []
    for entry in slides_raw:
        try:
            slide_events.append(
                SlideEvent(
                    t_ms=int(entry["t_ms"]),
                    image_ref=str(entry["image"]),
                    slide_index=int(entry["slide_index"]),
                    build_index=int(entry["build_index"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BundleInvalid(f"malformed slide entry {entry!r}: {exc}") from exc

    try:
        cues = parse_transcript_cues(transcript_path.read_text(encoding="utf-8"))
    except IngestError as exc:
        raise BundleInvalid(f"transcript.srt: {exc}") from exc
    blocks = segment_blocks(cues, max_block_chars=max_block_chars)

    bundle = LectureBundle(
        title=title,
        duration_ms=duration_ms,
        slide_events=slide_events,
        transcript_blocks=blocks,
        root=root,
    )
    findings = validate_bundle(bundle)
    if findings:
        raise BundleInvalid(findings[0].message, findings=tuple(findings))
    return bundle


def validate_bundle(bundle: LectureBundle) -> list[Finding]:
    """Check every bundle invariant; empty list means the bundle is sound."""
    findings: list[Finding] = []

    def bad(code: str, message: str, *subjects: str) -> None:
        findings.append(Finding(code=code, subjects=subjects, message=message))

    if bundle.duration_ms <= 0:
        bad("InvalidDuration", f"duration_ms must be positive, got {bundle.duration_ms}")

    events = bundle.slide_events
    if not events or events[0].t_ms != 0:
        bad("NoInitialSlide", "no slide event at t=0")
    prev_t = -1
    prev_key = (-1, -1)
    for i, ev in enumerate(events):
        sid = slide_event_id(i)
        if ev.t_ms < 0:
            bad("NegativeTimestamp", f"slide event {sid} at t_ms={ev.t_ms}", sid)
        if ev.t_ms < prev_t:
            bad("NonMonotonicSlideEvents", "non-monotonic slide events", sid)
        prev_t = ev.t_ms
        key = (ev.slide_index, ev.build_index)
        if key < prev_key:
            bad(
                "NonMonotonicBuilds",
                f"slide event {sid} build order regresses: {key} after {prev_key}",
                sid,
            )
        prev_key = key
        if ev.t_ms > bundle.duration_ms:
            bad("BeyondDuration", f"slide event {sid} at {ev.t_ms} exceeds duration", sid)
        if bundle.root is not None and not (bundle.root / ev.image_ref).is_file():
            bad("MissingAsset", f"missing slide image {ev.image_ref}", ev.image_ref)

    prev_block: TranscriptBlock | None = None
    for blk in bundle.transcript_blocks:
        if blk.end_ms < blk.start_ms:
            bad("InvalidBlockSpan", f"{blk.block_id} ends before it starts", blk.block_id)
        if not blk.text.strip():
            bad("EmptyBlock", f"{blk.block_id} has no text", blk.block_id)
        if prev_block is not None:
            if blk.start_ms < prev_block.start_ms:
                bad(
                    "NonMonotonicBlocks",
                    f"{blk.block_id} starts before {prev_block.block_id}",
                    prev_block.block_id,
                    blk.block_id,
                )
            elif blk.start_ms < prev_block.end_ms:
                bad(
                    "OverlappingBlocks",
                    f"{prev_block.block_id} overlaps {blk.block_id}",
                    prev_block.block_id,
                    blk.block_id,
                )
        if blk.end_ms > bundle.duration_ms:
            bad(
                "BeyondDuration",
                f"block {blk.block_id} ends at {blk.end_ms}, beyond duration",
                blk.block_id,
            )
        prev_block = blk

    return findings
