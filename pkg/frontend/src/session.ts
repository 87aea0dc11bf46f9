/**
 * Guided session flow: configure, calibrate against the HUD, researcher
 * start gate, flight, completion notice, questionnaire. The controller is
 * stateless with respect to simulation truth; everything it knows about the
 * vehicle arrives in state/stop/event messages, so killing and rejoining
 * the UI never changes what the service records.
 */

import { CockpitClient } from "./client.js";
import { Course, parseCourse } from "./course.js";
import { HeadPose } from "./input.js";
import { StatePayload } from "./protocol.js";
import { SsqForm, Phase as SsqPhase } from "./ssq.js";

export type FlowPhase =
  | "idle"
  | "configured"
  | "calibrating"
  | "ready"
  | "flying"
  | "done"
  | "finished";

export interface SessionEvents {
  onPhase?: (phase: FlowPhase) => void;
  onCourse?: (course: Course) => void;
  onState?: (state: StatePayload) => void;
  onCalibrated?: (pitchOffsetDeg: number, rollOffsetDeg: number) => void;
  onFlightEnd?: (summary: Record<string, unknown>) => void;
  onSsqRecorded?: (phase: string, total: number) => void;
  onError?: (message: string) => void;
}

export class SessionController {
  phase: FlowPhase = "idle";
  course: Course | null = null;
  lastState: StatePayload | null = null;
  flightSummary: Record<string, unknown> | null = null;
  calibrationSamplesSent = 0;

  constructor(
    private client: CockpitClient,
    private events: SessionEvents = {},
  ) {
    const prior = client.handlers;
    client.handlers = {
      ...prior,
      onState: (state) => {
        this.lastState = state;
        this.events.onState?.(state);
        prior.onState?.(state);
      },
      onEvent: (name, payload) => {
        this.handleEvent(name, payload);
        prior.onEvent?.(name, payload);
      },
      onStop: (payload) => {
        this.setPhase("done");
        prior.onStop?.(payload);
      },
    };
  }

  private setPhase(phase: FlowPhase): void {
    if (this.phase !== phase) {
      this.phase = phase;
      this.events.onPhase?.(phase);
    }
  }

  private handleEvent(name: string, payload: Record<string, unknown>): void {
    switch (name) {
      case "configured": {
        this.course = parseCourse(String(payload.course ?? ""));
        this.events.onCourse?.(this.course);
        this.setPhase("configured");
        break;
      }
      case "calibration_started":
        this.calibrationSamplesSent = 0;
        this.setPhase("calibrating");
        break;
      case "calibrated":
        this.events.onCalibrated?.(
          Number(payload.pitch_offset_deg ?? 0),
          Number(payload.roll_offset_deg ?? 0),
        );
        this.setPhase("ready");
        break;
      case "started":
        this.setPhase("flying");
        break;
      case "flight_completed":
      case "flight_aborted":
        this.flightSummary = payload;
        this.events.onFlightEnd?.(payload);
        break;
      case "ssq_recorded":
        this.events.onSsqRecorded?.(String(payload.phase), Number(payload.total ?? 0));
        if (payload.phase === "post") this.setPhase("finished");
        break;
      case "error":
        this.events.onError?.(String(payload.message ?? "unknown error"));
        break;
      default:
        break;
    }
  }

  configure(participant: string, day: number, training: boolean, latencyLevel?: number, courseSeed?: number): void {
    this.client.configure({
      participant,
      day,
      training,
      ...(latencyLevel !== undefined ? { latency_level: latencyLevel } : {}),
      ...(courseSeed !== undefined ? { course_seed: courseSeed } : {}),
    });
  }

  beginCalibration(): void {
    this.client.calibrateBegin();
  }

  finishCalibration(): void {
    this.client.calibrateDone();
  }

  requestStart(): void {
    this.client.start();
  }

  abortFlight(): void {
    this.client.stopFlight();
  }

  /** Streams the current head pose; used during calibration and flight. */
  pushPose(pose: HeadPose, timestampS = 0): void {
    if (this.phase !== "calibrating" && this.phase !== "flying") return;
    this.client.sendInput(pose, timestampS);
    if (this.phase === "calibrating") this.calibrationSamplesSent += 1;
  }

  /** Validates and submits a questionnaire; throws while items are missing. */
  submitSsq(form: SsqForm, phase: SsqPhase): void {
    this.client.submitSsq(form.toPayload(phase));
  }

  /** Index of the next waypoint plane ahead of the vehicle, for rendering. */
  nextWaypointIndex(): number | undefined {
    if (!this.course || !this.lastState) return undefined;
    const z = this.lastState.z_m;
    for (const w of this.course.waypoints) {
      if (w.planeZ > z) return w.index;
    }
    return undefined;
  }
}
