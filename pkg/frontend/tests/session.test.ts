import { describe, expect, it } from "vitest";

import { CockpitClient, SocketLike } from "../src/client.js";
import { SessionController, FlowPhase } from "../src/session.js";
import { SsqForm } from "../src/ssq.js";
import { decodeMessage, encodeMessage, WireMessage } from "../src/protocol.js";

const COURSE_TEXT = "# quadlag course v1\\nseed = 0\\nn_waypoints = 1\\naltitude_m = 6.0\\nwaypoint 1 0.0 5.0\\n";

class MockSocket implements SocketLike {
  sent: WireMessage[] = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  private serverSeq = 0;

  send(data: string): void {
    this.sent.push(decodeMessage(data));
  }

  close(): void {
    this.onclose?.();
  }

  /** Server-side push with a well-formed seq. */
  push(kind: WireMessage["kind"], payload: Record<string, unknown>, t = 0): void {
    this.onmessage?.({
      data: encodeMessage({ kind, seq: this.serverSeq++, timestamp_s: t, payload }),
    });
  }
}

function harness() {
  const socket = new MockSocket();
  const phases: FlowPhase[] = [];
  const client = new CockpitClient(socket, {});
  const session = new SessionController(client, { onPhase: (p) => phases.push(p) });
  return { socket, client, session, phases };
}

describe("session flow", () => {
  it("walks configure -> calibrate -> start -> fly -> stop -> ssq", () => {
    const { socket, session, phases } = harness();

    session.configure("P1", 1, true);
    expect(socket.sent.at(-1)?.kind).toBe("configure");
    socket.push("event", { name: "configured", course: COURSE_TEXT.replaceAll("\\n", "\n") });
    expect(session.phase).toBe("configured");
    expect(session.course?.waypoints).toHaveLength(1);

    session.beginCalibration();
    socket.push("event", { name: "calibration_started" });
    expect(session.phase).toBe("calibrating");
    for (let i = 0; i < 5; i++) {
      session.pushPose({ pitchDeg: 1, rollDeg: 0, yawDeg: 0 }, i / 75);
    }
    expect(session.calibrationSamplesSent).toBe(5);
    session.finishCalibration();
    socket.push("event", { name: "calibrated", pitch_offset_deg: 1, roll_offset_deg: 0 });
    expect(session.phase).toBe("ready");

    session.requestStart();
    socket.push("event", { name: "started" });
    expect(session.phase).toBe("flying");
    socket.push("state", {
      t_s: 0.01, x_m: 0, y_m: 6, z_m: 0.1, vx_mps: 0, vz_mps: 0.5,
      pitch_deg: 3, roll_deg: 0, setpoint_pitch_deg: 8, setpoint_roll_deg: 0,
      hud: { line_offset: 3, line_tilt: 0 },
    });
    expect(session.lastState?.z_m).toBe(0.1);

    socket.push("stop", { reason: "destination" });
    expect(session.phase).toBe("done");
    socket.push("event", { name: "flight_completed", status: "completed", N_w: 1 });
    expect(session.flightSummary?.N_w).toBe(1);

    const form = new SsqForm();
    for (let i = 0; i < 16; i++) form.set(i, 0);
    session.submitSsq(form, "post");
    expect(socket.sent.at(-1)?.kind).toBe("ssq_submit");
    socket.push("event", { name: "ssq_recorded", phase: "post", total: 0 });
    expect(session.phase).toBe("finished");

    expect(phases).toEqual(["configured", "calibrating", "ready", "flying", "done", "finished"]);
  });

  it("refuses to stream poses outside calibration and flight", () => {
    const { socket, session } = harness();
    session.pushPose({ pitchDeg: 5, rollDeg: 0, yawDeg: 0 });
    expect(socket.sent.filter((m) => m.kind === "input")).toHaveLength(0);
  });

  it("sends strictly increasing sequence numbers", () => {
    const { socket, session, client } = harness();
    session.configure("P1", 1, true);
    client.calibrateBegin();
    socket.push("event", { name: "calibration_started" });
    for (let i = 0; i < 10; i++) session.pushPose({ pitchDeg: 0, rollDeg: 0, yawDeg: 0 });
    client.start();
    const seqs = socket.sent.map((m) => m.seq);
    for (let i = 1; i < seqs.length; i++) expect(seqs[i]).toBeGreaterThan(seqs[i - 1]);
  });

  it("rejects an incomplete questionnaire before anything hits the wire", () => {
    const { socket, session } = harness();
    const form = new SsqForm();
    form.set(0, 1);
    expect(() => session.submitSsq(form, "post")).toThrow(/unanswered/);
    expect(socket.sent.filter((m) => m.kind === "ssq_submit")).toHaveLength(0);
  });

  it("surfaces server error events", () => {
    const socket = new MockSocket();
    const errors: string[] = [];
    const client = new CockpitClient(socket, {});
    new SessionController(client, { onError: (m) => errors.push(m) });
    socket.push("event", { name: "error", message: "calibrate before starting" });
    expect(errors).toEqual(["calibrate before starting"]);
  });

  it("reports the next waypoint ahead of the vehicle", () => {
    const { socket, session } = harness();
    session.configure("P1", 1, true);
    socket.push("event", { name: "configured", course: COURSE_TEXT.replaceAll("\\n", "\n") });
    socket.push("event", { name: "started" });
    socket.push("state", {
      t_s: 0, x_m: 0, y_m: 6, z_m: 0.5, vx_mps: 0, vz_mps: 0,
      pitch_deg: 0, roll_deg: 0, setpoint_pitch_deg: 0, setpoint_roll_deg: 0,
      hud: { line_offset: 0, line_tilt: 0 },
    });
    expect(session.nextWaypointIndex()).toBe(1);
    socket.push("state", {
      t_s: 1, x_m: 0, y_m: 6, z_m: 6.0, vx_mps: 0, vz_mps: 0,
      pitch_deg: 0, roll_deg: 0, setpoint_pitch_deg: 0, setpoint_roll_deg: 0,
      hud: { line_offset: 0, line_tilt: 0 },
    });
    expect(session.nextWaypointIndex()).toBeUndefined();
  });
});
