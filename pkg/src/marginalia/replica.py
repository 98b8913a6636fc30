"""Client-side state replica: applies full-state snapshots and delta streams.

The replica holds the same state record the engine digests, so a client
that has applied deltas through engine step N can prove convergence by
comparing digests with the engine at N. Envelope ``seq`` numbers are the
contiguous broadcast counter used for gap detection; ``step`` is the engine
step the payload came from. The TypeScript simulator mirrors this logic;
this copy is the reference and the test harness.
"""

from __future__ import annotations

import copy

from .engine import state_digest


class ReplicaError(Exception):
    pass


class SeqGap(ReplicaError):
    def __init__(self, expected: int, got: int) -> None:
        super().__init__(f"expected delta seq {expected}, got {got}")
        self.expected = expected
        self.got = got


class ClientReplica:
    def __init__(self) -> None:
        self.seq: int | None = None  # broadcast counter (gap detection)
        self.step: int | None = None  # engine step the state reflects
        self.state: dict | None = None
        self.ui: dict = {"cursor": None, "attention": "indirect"}
        self.effects_log: list[dict] = []
        self.errors: list[dict] = []
        self.acks: list[int] = []

    # ------------------------------------------------------------------

    def apply(self, envelope: dict) -> None:
        kind = envelope.get("kind")
        if kind == "full_state":
            self.apply_full_state(envelope)
        elif kind == "delta":
            self.apply_delta(envelope)
        elif kind == "ack":
            self.acks.append(envelope["seq"])
        elif kind == "error":
            self.errors.append(envelope)
        else:
            raise ReplicaError(f"unexpected envelope kind {kind!r}")

    def apply_full_state(self, envelope: dict) -> None:
        payload = envelope["payload"]
        self.seq = envelope["seq"]
        self.step = envelope["step"]
        # Copy: the replica owns (and mutates) everything it installs.
        self.state = copy.deepcopy(payload["state"])
        self.ui = dict(payload["ui"])

    def apply_delta(self, envelope: dict) -> None:
        """Apply one delta; raises SeqGap when a broadcast was missed."""
        if self.state is None:
            raise ReplicaError("delta before full state")
        seq = envelope["seq"]
        if self.seq is not None and seq <= self.seq:
            return  # duplicate of state the snapshot already covered
        if self.seq is not None and seq != self.seq + 1:
            raise SeqGap(self.seq + 1, seq)
        for change in envelope["changes"]:
            self._apply_change(change)
        self.effects_log.extend(envelope.get("effects", ()))
        self.seq = seq
        self.step = envelope["step"]

    def digest(self) -> str:
        if self.state is None:
            raise ReplicaError("no state yet")
        return state_digest(self.state)

    # ------------------------------------------------------------------

    def _doc(self) -> dict:
        return self.state["document"]

    def _apply_change(self, ch: dict) -> None:
        op = ch["op"]
        if op == "cursor":
            self.ui["cursor"] = {"surface": ch["surface"], "pos": ch["pos"], "style": ch["style"]}
        elif op == "cursor_hidden":
            self.ui["cursor"] = None
        elif op == "attention":
            self.ui["attention"] = ch["attention"]
        elif op == "element_added":
            self._doc()["elements"].append(copy.deepcopy(ch["element"]))
        elif op == "annotation_added":
            cap = self._find_capture(ch["capture_id"])
            if cap is None:
                raise ReplicaError(f"annotation for unknown capture {ch['capture_id']}")
            cap["annotations"].append(copy.deepcopy(ch["stroke"]))
        elif op == "strokes_removed":
            gone = set(ch["stroke_ids"])
            doc = self._doc()
            doc["elements"] = [
                el
                for el in doc["elements"]
                if el["type"] != "stroke" or el["stroke_id"] not in gone
            ]
            for el in doc["elements"]:
                if el["type"] == "capture" and el["annotations"]:
                    el["annotations"] = [
                        s for s in el["annotations"] if s["stroke_id"] not in gone
                    ]
        elif op == "viewport":
            self._doc()["viewport_top_y"] = ch["top_y"]
        elif op == "revision":
            self._doc()["revision"] = ch["revision"]
        elif op == "panel":
            self.state[ch["panel"]].update(ch["fields"])
        elif op == "overlay_added":
            overlay = self.state[ch["panel"]]["overlay"]
            overlay.setdefault(ch["snapshot_id"], []).append(copy.deepcopy(ch["stroke"]))
        elif op == "overlay_removed":
            overlay = self.state[ch["panel"]]["overlay"]
            sid = ch["snapshot_id"]
            gone = set(ch["stroke_ids"])
            if sid in overlay:
                kept = [s for s in overlay[sid] if s["stroke_id"] not in gone]
                if kept:
                    overlay[sid] = kept
                else:
                    del overlay[sid]
        elif op == "overlay_cleared":
            self.state[ch["panel"]]["overlay"].pop(ch["snapshot_id"], None)
        elif op == "open_capture":
            open_map = self.state[ch["panel"]]["open_capture"]
            if ch["capture_id"] is None:
                open_map.pop(ch["snapshot_id"], None)
            else:
                open_map[ch["snapshot_id"]] = ch["capture_id"]
        elif op == "overlay_edit":
            edits = self.state[ch["panel"]]["last_overlay_edit_ms"]
            if ch["t_ms"] is None:
                edits.pop(ch["snapshot_id"], None)
            else:
                edits[ch["snapshot_id"]] = ch["t_ms"]
        elif op == "tools":
            self.state["tools"] = {"active": ch["active"], "last_drawing": ch["last_drawing"]}
        elif op == "clock":
            self.state["clock_ms"] = ch["clock_ms"]
        elif op == "error":
            pass  # informational only; state never changed
        else:
            raise ReplicaError(f"unknown delta op {op!r}")

    def _find_capture(self, capture_id: str) -> dict | None:
        for el in self._doc()["elements"]:
            if el["type"] == "capture" and el["capture_id"] == capture_id:
                return el
        return None
