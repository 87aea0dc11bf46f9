/**
 * Wire protocol: one JSON object per WebSocket text frame.
 *
 * Fields: kind, seq (strictly increasing per direction), timestamp_s,
 * payload. The cockpit never invents simulation truth; everything it
 * displays about the vehicle arrives in `state` messages.
 */

export const PROTOCOL_VERSION = 1;

export const KINDS = [
  "hello",
  "configure",
  "calibrate_begin",
  "calibrate_done",
  "start",
  "input",
  "state",
  "event",
  "stop",
  "ssq_submit",
] as const;

export type Kind = (typeof KINDS)[number];

export interface WireMessage {
  kind: Kind;
  seq: number;
  timestamp_s: number;
  payload: Record<string, unknown>;
}

export interface StatePayload {
  t_s: number;
  x_m: number;
  y_m: number;
  z_m: number;
  vx_mps: number;
  vz_mps: number;
  pitch_deg: number;
  roll_deg: number;
  setpoint_pitch_deg: number;
  setpoint_roll_deg: number;
  hud: { line_offset: number; line_tilt: number };
}

export function encodeMessage(msg: WireMessage): string {
  return JSON.stringify({
    kind: msg.kind,
    seq: msg.seq,
    timestamp_s: msg.timestamp_s,
    payload: msg.payload,
  });
}

export function decodeMessage(text: string): WireMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch (err) {
    throw new Error(`malformed wire message: ${err}`);
  }
  if (typeof obj !== "object" || obj === null) {
    throw new Error("wire message must be a JSON object");
  }
  const record = obj as Record<string, unknown>;
  const kind = record.kind;
  if (typeof kind !== "string" || !(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown message kind ${JSON.stringify(kind)}`);
  }
  const seq = record.seq;
  if (typeof seq !== "number" || !Number.isInteger(seq) || seq < 0) {
    throw new Error(`seq must be a nonnegative integer, got ${JSON.stringify(seq)}`);
  }
  const payload = record.payload ?? {};
  if (typeof payload !== "object" || payload === null || Array.isArray(payload)) {
    throw new Error("payload must be a JSON object");
  }
  return {
    kind: kind as Kind,
    seq,
    timestamp_s: typeof record.timestamp_s === "number" ? record.timestamp_s : 0,
    payload: payload as Record<string, unknown>,
  };
}

/** Outgoing sequence numbers for one connection direction. */
export class SeqCounter {
  private next_ = 0;
  next(): number {
    return this.next_++;
  }
}

/** Accepts only strictly increasing sequence numbers. */
export class SequenceTracker {
  private last = -1;
  accept(seq: number): boolean {
    if (seq <= this.last) return false;
    this.last = seq;
    return true;
  }
}

export function asState(payload: Record<string, unknown>): StatePayload {
  return payload as unknown as StatePayload;
}
