"""Live session host: WebSocket endpoint, tick loop, persistence.

One pilot client and any number of observers share a session. The tick loop
is the single writer of simulation state; it reads the most recently
accepted input each tick (sample-and-hold), advances the simulation,
records a sample, and broadcasts the state. Slow observers get stale frames
dropped rather than stalling the loop, and the flight log is tick-complete
regardless of network behavior because simulation time is tick-counted, not
wall-clock.
"""

from __future__ import annotations

import asyncio
import contextlib
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .course import Course, course_to_text, generate_course, make_training_course
from .flightlog import FlightLog, FlightSample
from .headmap import HeadSample, MappingConfig, ZeroReference, calibrate_zero, map_head
from .metrics import metrics_report
from .protocol import (
    STATUS_ABORTED,
    STATUS_COMPLETED,
    SessionEntry,
    SessionPlan,
    SessionRecord,
    SessionRecorder,
    load_plans,
    save_input_stream,
)
from .calibration import level_by_ordinal
from .sim import QuadState, SimConfig, initial_state, sim_tick, sim_tick_direct, with_gain
from .ssq import PHASE_PRE, SsqResponse, score_ssq
from .wire import (
    KIND_CALIBRATE_BEGIN,
    KIND_CALIBRATE_DONE,
    KIND_CONFIGURE,
    KIND_EVENT,
    KIND_HELLO,
    KIND_INPUT,
    KIND_SSQ_SUBMIT,
    KIND_START,
    KIND_STATE,
    KIND_STOP,
    MessageCounter,
    PROTOCOL_VERSION,
    ROLE_OBSERVER,
    ROLE_PILOT,
    SequenceTracker,
    WireMessage,
    decode_message,
    encode_message,
)

PHASE_IDLE = "idle"
PHASE_CONFIGURED = "configured"
PHASE_CALIBRATING = "calibrating"
PHASE_READY = "ready"
PHASE_FLYING = "flying"
PHASE_DONE = "done"

_QUEUE_SIZE = 256


@dataclass(slots=True)
class ServeConfig:
    host: str = "127.0.0.1"
    port: int = 8750
    data_dir: str = "quadlag-data"
    plan_path: str | None = None
    sim: SimConfig = field(default_factory=SimConfig)
    mapping: MappingConfig = field(default_factory=MappingConfig)
    realtime: bool = True
    max_duration_s: float = 900.0
    n_waypoints: int = 100


class ClientConn:
    """One connected websocket: outgoing queue plus per-direction counters."""

    def __init__(self, ws: WebSocket, role: str):
        self.ws = ws
        self.role = role
        self.out_seq = MessageCounter()
        self.in_seq = SequenceTracker()
        self.queue: asyncio.Queue[str] = asyncio.Queue(maxsize=_QUEUE_SIZE)

    def send(self, kind: str, payload: dict, timestamp_s: float = 0.0) -> None:
        text = encode_message(WireMessage(kind, self.out_seq.next(), timestamp_s, payload))
        try:
            self.queue.put_nowait(text)
        except asyncio.QueueFull:
            # Coalesce: drop the oldest frame rather than stall the tick loop.
            with contextlib.suppress(asyncio.QueueEmpty):
                self.queue.get_nowait()
            with contextlib.suppress(asyncio.QueueFull):
                self.queue.put_nowait(text)


class SessionHost:
    """Owns the live session state machine and the tick loop."""

    def __init__(self, config: ServeConfig):
        self.config = config
        self.recorder = SessionRecorder(config.data_dir)
        self.plans: list[SessionPlan] = []
        if config.plan_path:
            self.plans = load_plans(config.plan_path)
        self.clients: list[ClientConn] = []
        self.pilot: ClientConn | None = None
        self.phase = PHASE_IDLE
        self.entry: SessionEntry | None = None
        self.course: Course | None = None
        self.cfg: SimConfig = config.sim
        self.zero: ZeroReference | None = None
        self.held = HeadSample()
        self.calib_samples: list[HeadSample] = []
        self.pre_ssq: SsqResponse | None = None
        self.post_ssq: SsqResponse | None = None
        self.record: SessionRecord | None = None
        self.flight_task: asyncio.Task | None = None

    # -- client lifecycle -------------------------------------------------

    def attach(self, ws: WebSocket, requested_role: str) -> ClientConn:
        role = requested_role if requested_role in (ROLE_PILOT, ROLE_OBSERVER) else ROLE_OBSERVER
        if role == ROLE_PILOT and self.pilot is not None:
            role = ROLE_OBSERVER  # pilot slot taken; demote
        conn = ClientConn(ws, role)
        self.clients.append(conn)
        if role == ROLE_PILOT:
            self.pilot = conn
        return conn

    def detach(self, conn: ClientConn) -> None:
        if conn in self.clients:
            self.clients.remove(conn)
        if conn is self.pilot:
            self.pilot = None
            if self.phase == PHASE_FLYING and self.flight_task is not None:
                self.flight_task.cancel()

    def broadcast(self, kind: str, payload: dict, timestamp_s: float = 0.0) -> None:
        for conn in self.clients:
            conn.send(kind, payload, timestamp_s)

    # -- message handling ---------------------------------------------------

    def _entry_from_payload(self, payload: dict) -> SessionEntry:
        participant = str(payload.get("participant", "P1"))
        day = int(payload.get("day", 1))
        training = bool(payload.get("training", False))
        for plan in self.plans:
            if plan.participant_id == participant:
                entry = plan.entry_for_day(day)
                if training:
                    entry = SessionEntry(participant, day, 0, 0, training=True)
                return entry
        return SessionEntry(
            participant_id=participant,
            day_index=day,
            latency_level=int(payload.get("latency_level", 0 if training else 1)),
            course_seed=int(payload.get("course_seed", 1)),
            training=training,
        )

    def handle(self, conn: ClientConn, msg: WireMessage) -> None:
        kind = msg.kind
        if kind == KIND_INPUT:
            self._handle_input(conn, msg)
        elif kind == KIND_CONFIGURE:
            self._handle_configure(conn, msg)
        elif kind == KIND_CALIBRATE_BEGIN:
            if conn is not self.pilot:
                conn.send(KIND_EVENT, {"name": "error", "message": "only the pilot calibrates"})
                return
            self.calib_samples = []
            self.phase = PHASE_CALIBRATING
            self.broadcast(KIND_EVENT, {"name": "calibration_started"})
        elif kind == KIND_CALIBRATE_DONE:
            self._handle_calibrate_done(conn)
        elif kind == KIND_START:
            self._handle_start(conn)
        elif kind == KIND_STOP:
            if conn is self.pilot and self.phase == PHASE_FLYING and self.flight_task is not None:
                self.flight_task.cancel()
        elif kind == KIND_SSQ_SUBMIT:
            self._handle_ssq(conn, msg)
        elif kind == KIND_HELLO:
            conn.send(KIND_EVENT, {"name": "error", "message": "already greeted"})

    def _handle_input(self, conn: ClientConn, msg: WireMessage) -> None:
        if conn is not self.pilot:
            return  # observers cannot inject input
        if not conn.in_seq.accept(msg.seq):
            return  # stale or duplicate; discard
        p = msg.payload
        sample = HeadSample(
            pitch_deg=float(p.get("pitch_deg", 0.0)),
            roll_deg=float(p.get("roll_deg", 0.0)),
            yaw_deg=float(p.get("yaw_deg", 0.0)),
            timestamp_s=float(p.get("timestamp_s", msg.timestamp_s)),
        )
        self.held = sample
        if self.phase == PHASE_CALIBRATING:
            self.calib_samples.append(sample)

    def _handle_configure(self, conn: ClientConn, msg: WireMessage) -> None:
        if conn is not self.pilot:
            conn.send(KIND_EVENT, {"name": "error", "message": "only the pilot configures"})
            return
        if self.phase == PHASE_FLYING:
            conn.send(KIND_EVENT, {"name": "error", "message": "flight in progress"})
            return
        entry = self._entry_from_payload(msg.payload)
        if entry.training:
            cfg = self.config.sim
            course = make_training_course(cfg.altitude_m)
        else:
            cfg = with_gain(self.config.sim, level_by_ordinal(entry.latency_level).gain)
            course = generate_course(entry.course_seed, self.config.n_waypoints, cfg.altitude_m)
        self.entry = entry
        self.cfg = cfg
        self.course = course
        self.zero = None
        self.held = HeadSample()  # a new session never inherits held input
        self.pre_ssq = None
        self.post_ssq = None
        self.record = None
        self.phase = PHASE_CONFIGURED
        self.broadcast(
            KIND_EVENT,
            {
                "name": "configured",
                "participant": entry.participant_id,
                "day": entry.day_index,
                "latency_level": entry.latency_level,
                "training": entry.training,
                "course": course_to_text(course),
                "tick_rate_hz": cfg.tick_rate_hz,
                "tilt_limit_deg": cfg.tilt_limit_deg,
                "altitude_m": cfg.altitude_m,
            },
        )

    def _handle_calibrate_done(self, conn: ClientConn) -> None:
        if conn is not self.pilot:
            conn.send(KIND_EVENT, {"name": "error", "message": "only the pilot calibrates"})
            return
        if not self.calib_samples:
            conn.send(KIND_EVENT, {"name": "error", "message": "no calibration samples received"})
            return
        self.zero = calibrate_zero(self.calib_samples)
        self.phase = PHASE_READY
        self.broadcast(
            KIND_EVENT,
            {
                "name": "calibrated",
                "pitch_offset_deg": self.zero.pitch_offset_deg,
                "roll_offset_deg": self.zero.roll_offset_deg,
                "n_samples": len(self.calib_samples),
            },
        )

    def _handle_start(self, conn: ClientConn) -> None:
        # The start gate may be pressed from the researcher (observer) screen.
        if self.phase == PHASE_FLYING:
            conn.send(KIND_EVENT, {"name": "error", "message": "already flying"})
            return
        if self.entry is None or self.course is None:
            conn.send(KIND_EVENT, {"name": "error", "message": "configure a session first"})
            return
        if self.zero is None:
            if self.entry.training:
                self.zero = ZeroReference()
            else:
                conn.send(KIND_EVENT, {"name": "error", "message": "calibrate before starting"})
                return
        self.phase = PHASE_FLYING
        self.flight_task = asyncio.get_running_loop().create_task(self._run_flight())

    def _handle_ssq(self, conn: ClientConn, msg: WireMessage) -> None:
        if conn is not self.pilot:
            conn.send(KIND_EVENT, {"name": "error", "message": "only the pilot submits questionnaires"})
            return
        payload = msg.payload
        try:
            resp = SsqResponse(
                items=tuple(int(v) for v in payload.get("items", ())),
                phase=str(payload.get("phase", "")),
                session_id=self._session_id(),
            )
        except (TypeError, ValueError) as exc:
            conn.send(KIND_EVENT, {"name": "error", "message": f"invalid questionnaire: {exc}"})
            return
        if resp.phase == PHASE_PRE:
            self.pre_ssq = resp
        else:
            self.post_ssq = resp
        if self.record is not None:
            self.record.pre_ssq = self.pre_ssq
            self.record.post_ssq = self.post_ssq
            self.recorder.save_session(self.record)
        score = score_ssq(resp)
        conn.send(
            KIND_EVENT,
            {
                "name": "ssq_recorded",
                "phase": resp.phase,
                "nausea": score.nausea,
                "oculomotor": score.oculomotor,
                "disorientation": score.disorientation,
                "total": score.total,
            },
        )

    def _session_id(self) -> str:
        if self.entry is None:
            return ""
        suffix = "-training" if self.entry.training else ""
        return f"{self.entry.participant_id}-day{self.entry.day_index}{suffix}"

    # -- the tick loop -------------------------------------------------------

    async def _run_flight(self) -> None:
        assert self.entry is not None and self.course is not None and self.zero is not None
        entry, course, cfg, zero = self.entry, self.course, self.cfg, self.zero
        tick_fn = sim_tick_direct if entry.training else sim_tick
        dt = 1.0 / cfg.tick_rate_hz
        state = initial_state(cfg)
        samples = [FlightSample(state.t_s, state.x_m, state.z_m, state.attitude.pitch_deg, state.attitude.roll_deg)]
        held_inputs: list[HeadSample] = []
        max_ticks = int(self.config.max_duration_s * cfg.tick_rate_hz)
        completed = False
        self.broadcast(KIND_EVENT, {"name": "started"})
        try:
            mapping = self.config.mapping
            for _ in range(max_ticks):
                head = self.held  # sample-and-hold between input messages
                u = map_head(head, zero, cfg, mapping)
                state = tick_fn(state, u, cfg)
                samples.append(
                    FlightSample(state.t_s, state.x_m, state.z_m, state.attitude.pitch_deg, state.attitude.roll_deg)
                )
                held_inputs.append(head)
                self._broadcast_state(state, u, course)
                if course.destination.contains_point(state.x_m, state.y_m, state.z_m):
                    completed = True
                    break
                await asyncio.sleep(dt if self.config.realtime else 0)
        except asyncio.CancelledError:
            completed = False
        finally:
            self._finish_flight(samples, held_inputs, completed)

    def _broadcast_state(self, state: QuadState, u, course: Course) -> None:
        payload = {
            "t_s": state.t_s,
            "x_m": state.x_m,
            "y_m": state.y_m,
            "z_m": state.z_m,
            "vx_mps": state.vx_mps,
            "vz_mps": state.vz_mps,
            "pitch_deg": state.attitude.pitch_deg,
            "roll_deg": state.attitude.roll_deg,
            "setpoint_pitch_deg": u.pitch_setpoint_deg,
            "setpoint_roll_deg": u.roll_setpoint_deg,
            "hud": {"line_offset": state.attitude.pitch_deg, "line_tilt": state.attitude.roll_deg},
        }
        self.broadcast(KIND_STATE, payload, timestamp_s=state.t_s)

    def _finish_flight(self, samples: list[FlightSample], held_inputs: list[HeadSample], completed: bool) -> None:
        assert self.entry is not None
        entry = self.entry
        flight_log = FlightLog(
            session_id=self._session_id(),
            latency_level=entry.latency_level,
            course_seed=entry.course_seed,
            cfg=self.cfg,
            samples=samples,
            completed=completed,
        )
        status = STATUS_COMPLETED if completed else STATUS_ABORTED
        report = None
        if len(samples) >= 2:
            assert self.course is not None
            report = metrics_report(flight_log, self.course)
        self.record = SessionRecord(
            entry=entry,
            flight_log=flight_log,
            status=status,
            metrics=report,
            pre_ssq=self.pre_ssq,
            post_ssq=self.post_ssq,
            zero=self.zero,
        )
        out_dir = self.recorder.save_session(self.record)
        save_input_stream(held_inputs, f"{out_dir}/inputs.log")
        self.phase = PHASE_DONE
        self.broadcast(KIND_STOP, {"reason": "destination" if completed else "aborted"}, samples[-1].t_s)
        payload: dict = {"name": "flight_completed" if completed else "flight_aborted", "status": status}
        if report is not None:
            payload.update(
                T_s=report.T_s, S_mps=report.S_mps, D_m=report.D_m, N_w=report.N_w, N_c=report.N_c
            )
        self.broadcast(KIND_EVENT, payload, samples[-1].t_s)


def create_app(config: ServeConfig) -> FastAPI:
    app = FastAPI(title="quadlag telemetry service")
    host = SessionHost(config)
    app.state.host = host

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        try:
            hello = decode_message(await ws.receive_text())
        except (ValueError, WebSocketDisconnect):
            await ws.close()
            return
        if hello.kind != KIND_HELLO:
            await ws.close()
            return
        conn = host.attach(ws, str(hello.payload.get("role", ROLE_OBSERVER)))
        conn.send(
            KIND_HELLO,
            {"version": PROTOCOL_VERSION, "role": conn.role, "phase": host.phase},
        )

        async def pump() -> None:
            while True:
                await ws.send_text(await conn.queue.get())

        writer = asyncio.get_running_loop().create_task(pump())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = decode_message(text)
                except ValueError as exc:
                    conn.send(KIND_EVENT, {"name": "error", "message": str(exc)})
                    continue
                host.handle(conn, msg)
        except WebSocketDisconnect:
            pass
        finally:
            writer.cancel()
            host.detach(conn)

    return app


def serve(config: ServeConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
