"""Event-trace files and the headless replay harness.

A trace is newline-delimited JSON, one record per engine input:
``{"seq": n, "t_ms": t, "event": {...}}`` with the event in the wire schema.
Files ending in .gz are read/written gzip-compressed.
"""

from __future__ import annotations

import gzip
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

from .engine import EngineConfig, Session
from .events import MalformedEvent, validate_event
from .ingest import LectureBundle


class TraceMalformed(Exception):
    def __init__(self, line_no: int, reason: str) -> None:
        super().__init__(f"trace line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass
class ReplayReport:
    events_processed: int
    final_digest: str
    wall_time_ms: float
    effects_count: int
    # per-event engine latencies in ms, only collected when requested
    latencies_ms: list[float] | None = None


def _open_read(path: Path) -> IO[str]:
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def _open_write(path: Path) -> IO[str]:
    if path.suffix == ".gz":
        return gzip.open(path, "wt", encoding="utf-8")
    return open(path, "w", encoding="utf-8")


def format_trace_line(seq: int, t_ms: int, event: dict) -> str:
    return json.dumps(
        {"seq": seq, "t_ms": t_ms, "event": event}, sort_keys=True, separators=(",", ":")
    )


class TraceWriter:
    """Appends engine inputs to a trace file as they are processed."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._fh = _open_write(self.path)

    def append(self, seq: int, t_ms: int, event: dict) -> None:
        self._fh.write(format_trace_line(seq, t_ms, event))
        self._fh.write("\n")

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_trace(path: str | Path) -> Iterator[dict]:
    """Yield validated event records from a trace file."""
    p = Path(path)
    with _open_read(p) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TraceMalformed(line_no, f"not valid JSON: {exc}") from exc
            if not isinstance(record, dict) or "event" not in record:
                raise TraceMalformed(line_no, "record must be an object with an 'event'")
            try:
                yield validate_event(record["event"])
            except MalformedEvent as exc:
                raise TraceMalformed(line_no, str(exc)) from exc


def replay(
    bundle: LectureBundle,
    events: Iterable[dict],
    config: EngineConfig | None = None,
    advance_to_end: bool = True,
    collect_latencies: bool = False,
) -> tuple[Session, ReplayReport]:
    """Feed events through a fresh headless session and report the outcome."""
    session = Session(bundle, config)
    effects = 0
    count = 0
    latencies: list[float] | None = [] if collect_latencies else None
    started = time.perf_counter()
    if latencies is None:
        for event in events:
            effects += len(session.handle_event(event).effects)
            count += 1
    else:
        for event in events:
            t0 = time.perf_counter()
            result = session.handle_event(event)
            latencies.append((time.perf_counter() - t0) * 1000.0)
            effects += len(result.effects)
            count += 1
    if advance_to_end and session.clock_ms < bundle.duration_ms:
        session.advance_clock(bundle.duration_ms)
    wall_ms = (time.perf_counter() - started) * 1000.0
    report = ReplayReport(
        events_processed=count,
        final_digest=session.digest(),
        wall_time_ms=wall_ms,
        effects_count=effects,
        latencies_ms=latencies,
    )
    return session, report
