"""Wire protocol for live sessions: self-describing JSON text records.

Every message is one JSON object with the fields "kind", "seq",
"timestamp_s" and "payload". seq increases strictly per direction per
connection; receivers discard input messages whose seq does not advance.

Kinds and payloads:
  hello           client->server {version, role: "pilot"|"observer"}; reply
                  carries {version, role (granted), phase}
  configure       pilot->server {participant, day} (plan lookup) or
                  {latency_level, course_seed, training}; reply event
                  "configured" carries the course file text and sim config
  calibrate_begin pilot->server {}
  calibrate_done  pilot->server {}; reply event "calibrated" carries offsets
  start           any client->server {}
  input           pilot->server {pitch_deg, roll_deg, yaw_deg, timestamp_s}
  state           server->clients, every tick: full vehicle state plus the
                  current setpoints and HUD line placement
  event           server->clients {name, ...}
  stop            either direction {reason}
  ssq_submit      pilot->server {phase: "pre"|"post", items: [16 ints]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PROTOCOL_VERSION = 1

KIND_HELLO = "hello"
KIND_CONFIGURE = "configure"
KIND_CALIBRATE_BEGIN = "calibrate_begin"
KIND_CALIBRATE_DONE = "calibrate_done"
KIND_START = "start"
KIND_INPUT = "input"
KIND_STATE = "state"
KIND_EVENT = "event"
KIND_STOP = "stop"
KIND_SSQ_SUBMIT = "ssq_submit"

KINDS = (
    KIND_HELLO,
    KIND_CONFIGURE,
    KIND_CALIBRATE_BEGIN,
    KIND_CALIBRATE_DONE,
    KIND_START,
    KIND_INPUT,
    KIND_STATE,
    KIND_EVENT,
    KIND_STOP,
    KIND_SSQ_SUBMIT,
)

ROLE_PILOT = "pilot"
ROLE_OBSERVER = "observer"


@dataclass(slots=True)
class WireMessage:
    kind: str
    seq: int
    timestamp_s: float = 0.0
    payload: dict = field(default_factory=dict)


def encode_message(msg: WireMessage) -> str:
    return json.dumps(
        {"kind": msg.kind, "seq": msg.seq, "timestamp_s": msg.timestamp_s, "payload": msg.payload},
        separators=(",", ":"),
    )


def decode_message(text: str) -> WireMessage:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed wire message: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("wire message must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise ValueError(f"unknown message kind {kind!r}")
    seq = obj.get("seq")
    if not isinstance(seq, int) or seq < 0:
        raise ValueError(f"seq must be a nonnegative integer, got {seq!r}")
    payload = obj.get("payload", {})
    if not isinstance(payload, dict):
        raise ValueError("payload must be a JSON object")
    return WireMessage(kind=kind, seq=seq, timestamp_s=float(obj.get("timestamp_s", 0.0)), payload=payload)


class SequenceTracker:
    """Accepts only strictly increasing sequence numbers."""

    __slots__ = ("last",)

    def __init__(self) -> None:
        self.last = -1

    def accept(self, seq: int) -> bool:
        if seq <= self.last:
            return False
        self.last = seq
        return True


class MessageCounter:
    """Produces the strictly increasing outgoing seq for one direction."""

    __slots__ = ("_next",)

    def __init__(self) -> None:
        self._next = 0

    def next(self) -> int:
        value = self._next
        self._next += 1
        return value
