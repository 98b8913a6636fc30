"""Wire envelopes for the relay protocol (see docs/protocol.md).

Every WebSocket message is one UTF-8 JSON envelope. The server assigns
delta/ack sequence numbers from the engine step counter so clients can
detect gaps and request a full-state resync.
"""

from __future__ import annotations

import json

PROTOCOL_VERSION = 1

ROLE_HEADSET = "headset_sim"
ROLE_TABLET = "tablet_sim"
ROLE_OBSERVER = "observer"
ROLES = (ROLE_HEADSET, ROLE_TABLET, ROLE_OBSERVER)
EXCLUSIVE_ROLES = (ROLE_HEADSET, ROLE_TABLET)

# client -> server
KIND_HELLO = "hello"
KIND_EVENT = "event"
KIND_RESYNC = "resync"
KIND_CONTROL = "control"
# server -> client
KIND_FULL_STATE = "full_state"
KIND_DELTA = "delta"
KIND_ACK = "ack"
KIND_ERROR = "error"


class ProtocolError(Exception):
    def __init__(self, code: str, message: str) -> None:
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def hello(role: str, protocol_version: int = PROTOCOL_VERSION) -> dict:
    return {"kind": KIND_HELLO, "role": role, "protocol_version": protocol_version}


def event_envelope(event: dict) -> dict:
    return {"kind": KIND_EVENT, "event": event}


def resync() -> dict:
    return {"kind": KIND_RESYNC}


def control(action: str) -> dict:
    return {"kind": KIND_CONTROL, "action": action}


def ack(seq: int) -> dict:
    return {"kind": KIND_ACK, "seq": seq}


def error(code: str, message: str) -> dict:
    return {"kind": KIND_ERROR, "code": code, "message": message}


def full_state(snapshot: dict, broadcast_seq: int) -> dict:
    """Snapshot envelope; ``seq`` continues the broadcast counter, ``step``
    is the engine step the snapshot reflects."""
    return {
        "kind": KIND_FULL_STATE,
        "seq": broadcast_seq,
        "step": snapshot["seq"],
        "payload": snapshot,
    }


def delta(
    broadcast_seq: int, step: int, t_ms: int, effects: list[dict], changes: list[dict]
) -> dict:
    return {
        "kind": KIND_DELTA,
        "seq": broadcast_seq,
        "step": step,
        "t_ms": t_ms,
        "effects": effects,
        "changes": changes,
    }


def encode(envelope: dict) -> str:
    return json.dumps(envelope, separators=(",", ":"))


def decode(text: str) -> dict:
    try:
        envelope = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError("MalformedEnvelope", f"not valid JSON: {exc}") from exc
    if not isinstance(envelope, dict) or "kind" not in envelope:
        raise ProtocolError("MalformedEnvelope", "envelope must be an object with a kind")
    return envelope


def check_hello(envelope: dict) -> str:
    """Validate a hello envelope; returns the role."""
    if envelope.get("kind") != KIND_HELLO:
        raise ProtocolError("ExpectedHello", "first message must be a hello")
    version = envelope.get("protocol_version")
    if version != PROTOCOL_VERSION:
        raise ProtocolError(
            "VersionMismatch", f"server speaks version {PROTOCOL_VERSION}, client sent {version!r}"
        )
    role = envelope.get("role")
    if role not in ROLES:
        raise ProtocolError("UnknownRole", f"role must be one of {ROLES}, got {role!r}")
    return role
