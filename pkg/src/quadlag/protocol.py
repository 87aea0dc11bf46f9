"""Experiment plans and the session loop that runs a single flight.

A plan gives each participant five sessions, one latency level per day, with
a training flight before the day-1 session. The session loop is the single
writer of simulation state: each tick it reads the input source, maps head
orientation to setpoints, advances the simulation, and records one sample.
Recording stops the moment the vehicle enters the destination volume.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Protocol

from . import metrics as metrics_mod
from .calibration import LATENCY_LEVELS, level_by_ordinal
from .course import Course, generate_course, make_training_course
from .flightlog import FlightLog, FlightSample, save_flight_log
from .headmap import HeadSample, MappingConfig, ZeroReference, calibrate_zero, map_head
from .metrics import MetricsReport
from .rng import SplitMix64, mix_seed
from .sim import QuadState, SimConfig, initial_state, sim_tick, sim_tick_direct, with_gain
from .ssq import SsqResponse, score_ssq

STATUS_COMPLETED = "completed"
STATUS_ABORTED = "aborted"
STATUS_WITHDRAWN = "withdrawn"

PLAN_FORMAT_HEADER = "# quadlag plan v1"

#: Published session orders, one row per participant of the original study.
#: Used verbatim in replication mode.
TABLE_ORDERS: dict[str, tuple[int, ...]] = {
    "P1": (3, 5, 1, 2, 4),
    "P2": (1, 4, 5, 3, 2),
    "P3": (1, 2, 5, 3, 4),
    "P4": (5, 3, 2, 1, 4),
    "P5": (5, 2, 1, 3, 4),
    "P6": (5, 4, 1, 3, 2),
    "P7": (2, 3, 4, 1, 5),
    "P8": (3, 4, 5, 2, 1),
    "P9": (4, 2, 3, 1, 5),
}


class InputDisconnected(Exception):
    """Raised by an input source that lost its head tracker mid-flight."""


class SessionAborted(Exception):
    """Raised by an input source to abort the session manually."""


class InputSource(Protocol):
    def head_sample(self, state: QuadState, t_s: float) -> HeadSample:
        """Head pose for the tick at t_s given the currently observed state."""
        ...


@dataclass(frozen=True, slots=True)
class SessionEntry:
    participant_id: str
    day_index: int
    latency_level: int
    course_seed: int
    training: bool = False


@dataclass(frozen=True, slots=True)
class SessionPlan:
    participant_id: str
    entries: tuple[SessionEntry, ...]
    training_on_first_day: bool = True

    def entry_for_day(self, day_index: int) -> SessionEntry:
        for entry in self.entries:
            if entry.day_index == day_index:
                return entry
        raise ValueError(f"plan for {self.participant_id} has no day {day_index}")


@dataclass(slots=True)
class SessionRecord:
    entry: SessionEntry
    flight_log: FlightLog
    status: str
    metrics: MetricsReport | None = None
    pre_ssq: SsqResponse | None = None
    post_ssq: SsqResponse | None = None
    zero: ZeroReference | None = None


class RecordingSource:
    """Wraps an input source and keeps every sample it hands out, in order."""

    def __init__(self, source: InputSource):
        self._source = source
        self.samples: list[HeadSample] = []

    def head_sample(self, state: QuadState, t_s: float) -> HeadSample:
        sample = self._source.head_sample(state, t_s)
        self.samples.append(sample)
        return sample


class ReplaySource:
    """Plays a recorded sample stream back in call order."""

    def __init__(self, samples: list[HeadSample]):
        self._samples = samples
        self._pos = 0

    def head_sample(self, state: QuadState, t_s: float) -> HeadSample:
        if self._pos >= len(self._samples):
            raise InputDisconnected("recorded input stream exhausted")
        sample = self._samples[self._pos]
        self._pos += 1
        return sample


def save_input_stream(samples: list[HeadSample], path: str) -> None:
    """One 't pitch roll yaw' line per sample, repr floats for exact replay."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# quadlag inputs v1\n")
        for s in samples:
            fh.write(f"{s.timestamp_s!r} {s.pitch_deg!r} {s.roll_deg!r} {s.yaw_deg!r}\n")


def load_input_stream(path: str) -> list[HeadSample]:
    samples: list[HeadSample] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            t, pitch, roll, yaw = (float(part) for part in line.split())
            samples.append(HeadSample(pitch_deg=pitch, roll_deg=roll, yaw_deg=yaw, timestamp_s=t))
    return samples


def build_session_plan(
    participants: list[str],
    seed: int,
    replicate_table: bool = False,
    fixed_course_seed: int | None = None,
) -> list[SessionPlan]:
    """One five-session plan per participant.

    Latency levels are a seeded random permutation of 1..5 per participant,
    or the published orders when replicate_table is set. Each session gets
    its own course seed derived from (seed, participant, day) unless a fixed
    course seed is forced.
    """
    if not participants:
        raise ValueError("need at least one participant")
    plans: list[SessionPlan] = []
    for p_index, participant in enumerate(participants):
        if replicate_table:
            if participant not in TABLE_ORDERS:
                raise ValueError(
                    f"no published order for participant {participant!r}; expected one of {sorted(TABLE_ORDERS)}"
                )
            order = list(TABLE_ORDERS[participant])
        else:
            order = [entry.level for entry in LATENCY_LEVELS]
            SplitMix64(mix_seed(seed, p_index)).shuffle(order)
        entries = tuple(
            SessionEntry(
                participant_id=participant,
                day_index=day,
                latency_level=level,
                course_seed=(
                    fixed_course_seed
                    if fixed_course_seed is not None
                    else mix_seed(seed, p_index, day) % (1 << 63)
                ),
            )
            for day, level in enumerate(order, start=1)
        )
        plans.append(SessionPlan(participant_id=participant, entries=entries))
    return plans


def training_entry(plan: SessionPlan) -> SessionEntry:
    """The day-1 training flight: zero latency, single-waypoint course."""
    first = plan.entry_for_day(1)
    return SessionEntry(
        participant_id=plan.participant_id,
        day_index=1,
        latency_level=0,
        course_seed=0,
        training=True,
    )


# --- plan files --------------------------------------------------------------


def plans_to_text(plans: list[SessionPlan], seed: int | None = None) -> str:
    lines = [PLAN_FORMAT_HEADER]
    if seed is not None:
        lines.append(f"seed = {seed}")
    for plan in plans:
        lines.append(f"participant {plan.participant_id}")
        for entry in plan.entries:
            lines.append(
                f"  day {entry.day_index}: latency = {entry.latency_level}, course_seed = {entry.course_seed}"
            )
    return "\n".join(lines) + "\n"


def plans_from_text(text: str) -> list[SessionPlan]:
    lines = [line.rstrip() for line in text.splitlines()]
    if not lines or lines[0] != PLAN_FORMAT_HEADER:
        raise ValueError(f"not a plan file (expected leading {PLAN_FORMAT_HEADER!r})")
    plans: list[SessionPlan] = []
    participant: str | None = None
    entries: list[SessionEntry] = []

    def flush() -> None:
        nonlocal entries
        if participant is not None:
            plans.append(SessionPlan(participant_id=participant, entries=tuple(entries)))
        entries = []

    for line in lines[1:]:
        stripped = line.strip()
        if not stripped or stripped.startswith("seed"):
            continue
        if stripped.startswith("participant "):
            flush()
            participant = stripped.split(maxsplit=1)[1]
        elif stripped.startswith("day "):
            head, _, rest = stripped.partition(":")
            day = int(head.split()[1])
            fields = dict(
                (k.strip(), v.strip()) for k, v in (part.split("=") for part in rest.split(","))
            )
            entries.append(
                SessionEntry(
                    participant_id=participant or "",
                    day_index=day,
                    latency_level=int(fields["latency"]),
                    course_seed=int(fields["course_seed"]),
                )
            )
        else:
            raise ValueError(f"unrecognized plan line: {line!r}")
    flush()
    return plans


def save_plans(plans: list[SessionPlan], path: str, seed: int | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(plans_to_text(plans, seed))


def load_plans(path: str) -> list[SessionPlan]:
    with open(path, "r", encoding="utf-8") as fh:
        return plans_from_text(fh.read())


# --- the flight loop ----------------------------------------------------------


def fly_course(
    course: Course,
    cfg: SimConfig,
    source: InputSource,
    zero: ZeroReference,
    direct_mapping: bool = False,
    max_duration_s: float = 900.0,
    mapping: MappingConfig | None = None,
    on_tick: Callable[[QuadState], None] | None = None,
) -> tuple[list[FlightSample], bool]:
    """Run one flight; returns (samples, completed).

    Records the start pose at t = 0 and one sample per tick after it, stopping
    the instant the vehicle's position enters the destination volume or the
    duration budget runs out. An input source that disconnects or aborts ends
    the flight early with the partial samples preserved. direct_mapping
    bypasses the tilt lag (training); mapping selects the control mode
    (continuous by default).
    """
    tick = sim_tick_direct if direct_mapping else sim_tick
    mapping = mapping if mapping is not None else MappingConfig()
    state = initial_state(cfg)
    samples = [FlightSample(state.t_s, state.x_m, state.z_m, state.attitude.pitch_deg, state.attitude.roll_deg)]
    max_ticks = int(max_duration_s * cfg.tick_rate_hz)
    destination = course.destination
    for _ in range(max_ticks):
        try:
            head = source.head_sample(state, state.t_s)
        except (InputDisconnected, SessionAborted):
            return samples, False
        u = map_head(head, zero, cfg, mapping)
        state = tick(state, u, cfg)
        samples.append(
            FlightSample(state.t_s, state.x_m, state.z_m, state.attitude.pitch_deg, state.attitude.roll_deg)
        )
        if on_tick is not None:
            on_tick(state)
        if destination.contains_point(state.x_m, state.y_m, state.z_m):
            return samples, True
    return samples, False


def run_session(
    entry: SessionEntry,
    input_source: InputSource,
    recorder: "SessionRecorder | None" = None,
    cfg: SimConfig | None = None,
    course: Course | None = None,
    zero: ZeroReference | None = None,
    pre_ssq: SsqResponse | None = None,
    post_ssq: SsqResponse | None = None,
    max_duration_s: float = 900.0,
    calibration_ticks: int = 75,
    mapping: MappingConfig | None = None,
) -> SessionRecord:
    """Calibrate, fly, and record one session entry.

    Training entries use the single-waypoint course with the zero-latency
    direct mapping. An input source that disconnects or aborts leaves a
    partial log with status "aborted". The record is handed to the recorder
    (when given) before returning.
    """
    base_cfg = cfg if cfg is not None else SimConfig()
    if entry.training:
        flight_cfg = base_cfg
        flight_course = course if course is not None else make_training_course(base_cfg.altitude_m)
    else:
        flight_cfg = with_gain(base_cfg, level_by_ordinal(entry.latency_level).gain)
        flight_course = (
            course if course is not None else generate_course(entry.course_seed, altitude_m=base_cfg.altitude_m)
        )

    if zero is None:
        dt = 1.0 / flight_cfg.tick_rate_hz
        rest = initial_state(flight_cfg)
        calib = [
            input_source.head_sample(rest, -dt * (calibration_ticks - i)) for i in range(calibration_ticks)
        ]
        zero = calibrate_zero(calib)

    session_id = f"{entry.participant_id}-day{entry.day_index}" + ("-training" if entry.training else "")
    log = FlightLog(
        session_id=session_id,
        latency_level=entry.latency_level,
        course_seed=entry.course_seed,
        cfg=flight_cfg,
        samples=[],
        completed=False,
    )
    samples, completed = fly_course(
        flight_course,
        flight_cfg,
        input_source,
        zero,
        direct_mapping=entry.training,
        max_duration_s=max_duration_s,
        mapping=mapping,
    )
    log.samples = samples
    log.completed = completed
    status = STATUS_COMPLETED if completed else STATUS_ABORTED

    report = None
    if len(log.samples) >= 2:
        report = metrics_mod.metrics_report(log, flight_course)
    record = SessionRecord(
        entry=entry,
        flight_log=log,
        status=status,
        metrics=report,
        pre_ssq=pre_ssq,
        post_ssq=post_ssq,
        zero=zero,
    )
    if recorder is not None:
        recorder.save_session(record)
    return record


# --- on-disk session records ---------------------------------------------------


class SessionRecorder:
    """Writes session records under data_dir/<participant>/day<N>/."""

    def __init__(self, data_dir: str):
        self.data_dir = data_dir

    def session_dir(self, entry: SessionEntry) -> str:
        name = f"day{entry.day_index}" + ("-training" if entry.training else "")
        return os.path.join(self.data_dir, entry.participant_id, name)

    def save_session(self, record: SessionRecord) -> str:
        out_dir = self.session_dir(record.entry)
        os.makedirs(out_dir, exist_ok=True)
        save_flight_log(record.flight_log, os.path.join(out_dir, "flight.log"))
        lines = [
            f"participant = {record.entry.participant_id}",
            f"day_index = {record.entry.day_index}",
            f"latency_level = {record.entry.latency_level}",
            f"course_seed = {record.entry.course_seed}",
            f"training = {'true' if record.entry.training else 'false'}",
            f"status = {record.status}",
        ]
        if record.zero is not None:
            lines.append(f"zero_pitch_deg = {record.zero.pitch_offset_deg!r}")
            lines.append(f"zero_roll_deg = {record.zero.roll_offset_deg!r}")
        if record.metrics is not None:
            m = record.metrics
            lines += [
                f"T_s = {m.T_s!r}",
                f"S_mps = {m.S_mps!r}",
                f"D_m = {m.D_m!r}",
                f"N_w = {m.N_w}",
                f"N_c = {m.N_c}",
            ]
        for phase, resp in (("pre", record.pre_ssq), ("post", record.post_ssq)):
            if resp is not None:
                score = score_ssq(resp)
                lines.append(f"ssq_{phase}_items = {','.join(str(v) for v in resp.items)}")
                lines.append(
                    f"ssq_{phase}_scores = {score.nausea!r},{score.oculomotor!r},{score.disorientation!r},{score.total!r}"
                )
        path = os.path.join(out_dir, "session.txt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        return out_dir
