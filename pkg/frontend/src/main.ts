/**
 * Browser cockpit entry point. Query parameters select the session:
 *   ?server=ws://host:port/ws  (default: ws://<location.host>/ws)
 *   &role=pilot|observer       (default pilot)
 *   &participant=P1&day=1&training=1
 *   &input=pointer-drag|device-orientation|gamepad
 */

import { CockpitClient, Role } from "./client.js";
import { DEFAULT_HUD, drawHud, hudModel } from "./hud.js";
import { HeadPose, InputSource, PointerDragSource, SourceKind, pickSource } from "./input.js";
import { renderScene } from "./scene.js";
import { SessionController } from "./session.js";
import { RATING_LABELS, SSQ_SYMPTOMS, SsqForm, Phase as SsqPhase } from "./ssq.js";

const params = new URLSearchParams(window.location.search);
const serverUrl = params.get("server") ?? `ws://${window.location.host}/ws`;
const role = (params.get("role") === "observer" ? "observer" : "pilot") as Role;
const participant = params.get("participant") ?? "P1";
const day = parseInt(params.get("day") ?? "1", 10);
const training = params.get("training") === "1";
const inputKind = (params.get("input") ?? "pointer-drag") as SourceKind;

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusBar = document.getElementById("status")!;
const readout = document.getElementById("readout")!;
const banner = document.getElementById("banner")!;
const controls = document.getElementById("controls")!;
const ssqPanel = document.getElementById("ssq")!;

const view = { width: canvas.width, height: canvas.height, focal: canvas.width * 0.9 };
const hudConfig = { ...DEFAULT_HUD, width: canvas.width, height: canvas.height };

let source: InputSource | null = null;
let pose: HeadPose = { pitchDeg: 0, rollDeg: 0, yawDeg: 0 };
let session: SessionController | null = null;
let client: CockpitClient | null = null;

function setStatus(text: string): void {
  statusBar.textContent = text;
}

function button(label: string, onClick: () => void): HTMLButtonElement {
  const el = document.createElement("button");
  el.textContent = label;
  el.addEventListener("click", onClick);
  controls.appendChild(el);
  return el;
}

function buildSsqPanel(phase: SsqPhase, onSubmitted: () => void): void {
  ssqPanel.innerHTML = "";
  ssqPanel.style.display = "block";
  const form = new SsqForm();
  const title = document.createElement("h3");
  title.textContent = `Simulator Sickness Questionnaire (${phase}-session)`;
  ssqPanel.appendChild(title);
  const submit = document.createElement("button");
  submit.textContent = "Submit";
  submit.disabled = true;
  SSQ_SYMPTOMS.forEach((symptom, i) => {
    const row = document.createElement("div");
    row.className = "ssq-row";
    const label = document.createElement("span");
    label.textContent = `${i + 1}. ${symptom}`;
    row.appendChild(label);
    RATING_LABELS.forEach((ratingLabel, rating) => {
      const wrap = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = `ssq-${i}`;
      radio.addEventListener("change", () => {
        form.set(i, rating as 0 | 1 | 2 | 3);
        submit.disabled = !form.isComplete();
      });
      wrap.appendChild(radio);
      wrap.appendChild(document.createTextNode(ratingLabel));
      row.appendChild(wrap);
    });
    ssqPanel.appendChild(row);
  });
  submit.addEventListener("click", () => {
    session?.submitSsq(form, phase);
    ssqPanel.style.display = "none";
    onSubmitted();
  });
  ssqPanel.appendChild(submit);
}

function frame(): void {
  const state = session?.lastState ?? null;
  const cam = state
    ? { x: state.x_m, y: state.y_m, z: state.z_m, pitchDeg: state.pitch_deg, rollDeg: state.roll_deg }
    : { x: 0, y: 6, z: 0, pitchDeg: 0, rollDeg: 0 };
  renderScene(ctx, view, cam, session?.course ?? null, {
    nextWaypointIndex: session?.nextWaypointIndex(),
  });
  // HUD shows the vehicle attitude in flight and the head attitude while
  // calibrating (the pilot levels the horizon onto the marks).
  const calibrating = session?.phase === "calibrating";
  const hud = calibrating
    ? hudModel(pose.pitchDeg, pose.rollDeg, hudConfig)
    : hudModel(state?.pitch_deg ?? 0, state?.roll_deg ?? 0, hudConfig);
  drawHud(ctx, hud);
  // Live numbers for the researcher view and the pilot's degree readout.
  readout.textContent =
    `head pitch ${pose.pitchDeg.toFixed(1)} deg, roll ${pose.rollDeg.toFixed(1)} deg` +
    (state
      ? ` | t ${state.t_s.toFixed(1)} s, z ${state.z_m.toFixed(1)} m, ` +
        `v ${Math.hypot(state.vx_mps, state.vz_mps).toFixed(2)} m/s`
      : "");
  // Stream the pose at display cadence while it matters.
  if (role === "pilot") session?.pushPose(pose, state?.t_s ?? 0);
  requestAnimationFrame(frame);
}

async function boot(): Promise<void> {
  setStatus(`connecting to ${serverUrl} ...`);
  try {
    client = await CockpitClient.connect(serverUrl, role, {
      onDisconnect: () => {
        banner.style.display = "block";
        banner.textContent = "connection lost - session continues server-side";
      },
    });
  } catch {
    banner.style.display = "block";
    banner.textContent = `cannot reach ${serverUrl}`;
    return;
  }
  session = new SessionController(client, {
    onPhase: (phase) => setStatus(`phase: ${phase}`),
    onError: (message) => setStatus(`error: ${message}`),
    onCalibrated: (p, r) => setStatus(`calibrated (offsets ${p.toFixed(2)}, ${r.toFixed(2)} deg)`),
    onFlightEnd: (summary) => {
      const nw = summary.N_w ?? "-";
      setStatus(`flight ${summary.status}: waypoints passed ${nw}`);
      if (role === "pilot") buildSsqPanel("post", () => setStatus("questionnaire recorded"));
    },
  });

  if (role === "pilot") {
    source = pickSource(inputKind, canvas);
    source.start((p) => {
      pose = p;
    });
    if (source instanceof PointerDragSource) {
      canvas.addEventListener("dblclick", () => (source as PointerDragSource).recenter());
    }
    button("Configure", () => session!.configure(participant, day, training));
    button("Pre-session SSQ", () => buildSsqPanel("pre", () => setStatus("pre-session form recorded")));
    button("Calibrate", () => session!.beginCalibration());
    button("Calibration done", () => session!.finishCalibration());
    button("Start", () => session!.requestStart());
    button("Abort", () => session!.abortFlight());
  } else {
    // Researcher view: same scene, live status, start gate, no input controls.
    button("Start", () => session!.requestStart());
  }
  setStatus(`connected as ${client.grantedRole}`);
}

boot();
requestAnimationFrame(frame);
