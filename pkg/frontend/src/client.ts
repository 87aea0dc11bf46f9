/**
 * Wire-protocol client. Works over any WebSocket-shaped object so the test
 * suite can drive it with a mock or a Node websocket; the browser passes
 * the native WebSocket. All outgoing messages carry a strictly increasing
 * sequence number.
 */

import {
  PROTOCOL_VERSION,
  SeqCounter,
  StatePayload,
  WireMessage,
  asState,
  decodeMessage,
  encodeMessage,
  Kind,
} from "./protocol.js";
import { HeadPose } from "./input.js";
import { Phase as SsqPhase } from "./ssq.js";

export type Role = "pilot" | "observer";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export interface ClientHandlers {
  onHello?: (payload: Record<string, unknown>) => void;
  onState?: (state: StatePayload) => void;
  onEvent?: (name: string, payload: Record<string, unknown>) => void;
  onStop?: (payload: Record<string, unknown>) => void;
  onDisconnect?: () => void;
  onProtocolError?: (error: Error) => void;
}

export class CockpitClient {
  readonly outSeq = new SeqCounter();
  /** Role granted by the server (a second pilot is demoted to observer). */
  grantedRole: Role | null = null;

  constructor(
    private socket: SocketLike,
    public handlers: ClientHandlers = {},
  ) {
    socket.onmessage = (ev) => this.handleRaw(String(ev.data));
    socket.onclose = () => this.handlers.onDisconnect?.();
  }

  /** Opens a socket, sends hello, resolves once the server replies. */
  static connect(
    url: string,
    role: Role,
    handlers: ClientHandlers = {},
    socketFactory?: (url: string) => SocketLike,
  ): Promise<CockpitClient> {
    const make =
      socketFactory ?? ((u: string) => new WebSocket(u) as unknown as SocketLike);
    return new Promise((resolve, reject) => {
      const socket = make(url);
      const client = new CockpitClient(socket, handlers);
      const prevHello = handlers.onHello;
      client.handlers = {
        ...handlers,
        onHello: (payload) => {
          client.grantedRole = (payload.role as Role) ?? null;
          prevHello?.(payload);
          resolve(client);
        },
      };
      socket.onopen = () => {
        client.send("hello", { version: PROTOCOL_VERSION, role });
      };
      socket.onerror = (err) => reject(err instanceof Error ? err : new Error(String(err)));
    });
  }

  handleRaw(text: string): void {
    let msg: WireMessage;
    try {
      msg = decodeMessage(text);
    } catch (err) {
      this.handlers.onProtocolError?.(err as Error);
      return;
    }
    switch (msg.kind) {
      case "hello":
        this.grantedRole = (msg.payload.role as Role) ?? null;
        this.handlers.onHello?.(msg.payload);
        break;
      case "state":
        this.handlers.onState?.(asState(msg.payload));
        break;
      case "event":
        this.handlers.onEvent?.(String(msg.payload.name ?? ""), msg.payload);
        break;
      case "stop":
        this.handlers.onStop?.(msg.payload);
        break;
      default:
        break;
    }
  }

  send(kind: Kind, payload: Record<string, unknown> = {}, timestampS = 0): number {
    const seq = this.outSeq.next();
    this.socket.send(encodeMessage({ kind, seq, timestamp_s: timestampS, payload }));
    return seq;
  }

  sendInput(pose: HeadPose, timestampS = 0): number {
    return this.send(
      "input",
      {
        pitch_deg: pose.pitchDeg,
        roll_deg: pose.rollDeg,
        yaw_deg: pose.yawDeg,
        timestamp_s: timestampS,
      },
      timestampS,
    );
  }

  configure(payload: {
    participant: string;
    day: number;
    training?: boolean;
    latency_level?: number;
    course_seed?: number;
  }): void {
    this.send("configure", payload);
  }

  calibrateBegin(): void {
    this.send("calibrate_begin");
  }

  calibrateDone(): void {
    this.send("calibrate_done");
  }

  start(): void {
    this.send("start");
  }

  stopFlight(): void {
    this.send("stop", { reason: "manual" });
  }

  submitSsq(payload: { phase: SsqPhase; items: number[] }): void {
    this.send("ssq_submit", payload);
  }

  close(): void {
    this.socket.close();
  }
}
