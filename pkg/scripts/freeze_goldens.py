#!/usr/bin/env python3
"""Freeze golden digests for the bundled demo lecture and trace.

Run once after (re)generating assets; verifies determinism by replaying
twice before writing assets/golden.json.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from marginalia.export import export_structured, export_svg  # noqa: E402
from marginalia.ingest import load_bundle  # noqa: E402
from marginalia.trace import read_trace, replay  # noqa: E402

BUNDLE = REPO / "assets" / "demo-lecture"
TRACE = REPO / "assets" / "demo-trace.jsonl.gz"
OUT = REPO / "assets" / "golden.json"


def main() -> None:
    bundle = load_bundle(BUNDLE)

    _, fresh_a = replay(bundle, [])
    _, fresh_b = replay(bundle, [])
    assert fresh_a.final_digest == fresh_b.final_digest

    events = list(read_trace(TRACE))
    session, demo_a = replay(bundle, events)
    _, demo_b = replay(bundle, events)
    assert demo_a.final_digest == demo_b.final_digest

    export_hash = hashlib.sha256(export_structured(session.document)).hexdigest()
    svg_hash = hashlib.sha256(export_svg(session.document, bundle).encode("utf-8")).hexdigest()

    golden = {
        "fresh_session_digest": fresh_a.final_digest,
        "demo_trace_digest": demo_a.final_digest,
        "demo_trace_events": demo_a.events_processed,
        "demo_export_structured_sha256": export_hash,
        "demo_export_svg_sha256": svg_hash,
    }
    OUT.write_text(json.dumps(golden, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(golden, indent=2))


if __name__ == "__main__":
    main()
