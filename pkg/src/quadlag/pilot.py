"""Scripted pilot that flies a course without a human in the loop.

A proportional lateral controller with transport delay and optional angular
noise, used for automated end-to-end tests and for desk-scale latency
sweeps. Forward pitch is throttled by lateral alignment: the worse the
vehicle is lined up with its current target, the less it pushes forward.
That is what couples injected latency to completion time and average speed
(lagging tilt keeps the vehicle misaligned for longer), and it is also what
lets the pilot slow into the steep lateral jumps an uncooperative course
deals out instead of overrunning them.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from collections import deque

import numpy as np

from .calibration import LATENCY_LEVELS, LatencyLevel
from .course import Course, generate_course
from .flightlog import FlightLog
from .headmap import HeadSample, ZeroReference
from .metrics import MetricsReport, metrics_report
from .protocol import fly_course
from .rng import SplitMix64, mix_seed
from .sim import QuadState, SimConfig, with_gain

#: Commands are clamped to this head-plausible range before mapping.
HEAD_RANGE_DEG = 30.0

#: Fraction of forward command surrendered at full misalignment.
_THROTTLE_DEPTH = 0.8

#: Width of the handoff window before a waypoint plane in which the target
#: blends toward the following center. Wider windows cut corners and spoil
#: center passes, so this stays well under the inter-waypoint spacing.
_HANDOFF_M = 0.8


@dataclass(frozen=True, slots=True)
class PilotParams:
    forward_pitch_deg: float = 10.0
    lateral_gain: float = 3.5  # degrees of head roll per meter of lateral error
    lookahead_m: float = 5.0  # alignment horizon that scales the forward throttle
    reaction_delay_s: float = 0.2
    noise_deg: float = 0.0
    seed: int = 0


class SyntheticPilot:
    """One pilot instance per flight; satisfies the session-loop input protocol."""

    def __init__(self, params: PilotParams, course: Course, cfg: SimConfig):
        self.params = params
        self._plane_z = [w.plane_z_m for w in course.waypoints]
        self._center_x = [w.center_x_m for w in course.waypoints]
        dest = course.destination
        self._dest_x = (dest.min_x + dest.max_x) / 2
        self._next = 0
        self._rng = SplitMix64(params.seed)
        delay_ticks = int(round(params.reaction_delay_s * cfg.tick_rate_hz))
        self._queue: deque[tuple[float, float]] = deque(
            (0.0, 0.0) for _ in range(delay_ticks)
        )

    def _target_x(self, z: float) -> float:
        plane_z = self._plane_z
        n = len(plane_z)
        i = self._next
        while i < n and plane_z[i] <= z:
            i += 1
        self._next = i
        if i >= n:
            return self._dest_x
        target = self._center_x[i]
        distance = plane_z[i] - z
        handoff = min(_HANDOFF_M, self.params.lookahead_m)
        if distance < handoff:
            blend = (1.0 - distance / handoff) ** 2
            following = self._center_x[i + 1] if i + 1 < n else self._dest_x
            target = (1.0 - blend) * target + blend * following
        return target

    def step(self, observed: QuadState, t_s: float) -> HeadSample:
        """Head pose commanded for this tick (delayed, optionally noisy)."""
        if t_s < 0.0:
            # Calibration window: head held level.
            return HeadSample(0.0, 0.0, 0.0, t_s)
        p = self.params
        error = self._target_x(observed.z_m) - observed.x_m
        roll = p.lateral_gain * error
        misalignment = min(1.0, abs(error) / p.lookahead_m)
        pitch = p.forward_pitch_deg * (1.0 - _THROTTLE_DEPTH * misalignment)
        if p.noise_deg > 0.0:
            pitch += self._rng.gauss(0.0, p.noise_deg)
            roll += self._rng.gauss(0.0, p.noise_deg)
        pitch = max(-HEAD_RANGE_DEG, min(HEAD_RANGE_DEG, pitch))
        roll = max(-HEAD_RANGE_DEG, min(HEAD_RANGE_DEG, roll))
        self._queue.append((pitch, roll))
        delayed_pitch, delayed_roll = self._queue.popleft()
        return HeadSample(delayed_pitch, delayed_roll, 0.0, t_s)

    # Input-source protocol used by the session loop.
    head_sample = step


# --- latency sweeps ------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SweepRun:
    level: int
    gain: float
    run_index: int
    course_seed: int
    completed: bool
    metrics: MetricsReport | None


@dataclass(frozen=True, slots=True)
class LevelAggregate:
    level: int
    gain: float
    n_runs: int
    n_completed: int
    mean_T_s: float
    sd_T_s: float
    mean_S_mps: float
    sd_S_mps: float
    mean_D_m: float
    sd_D_m: float
    mean_N_w: float
    mean_N_c: float


@dataclass(frozen=True, slots=True)
class SweepResult:
    runs: tuple[SweepRun, ...]
    aggregates: tuple[LevelAggregate, ...]


def _mean_sd(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, sd


def run_pilot_sweep(
    params: PilotParams,
    levels: tuple[LatencyLevel, ...] = LATENCY_LEVELS,
    runs_per_level: int = 5,
    base_seed: int = 0,
    cfg: SimConfig | None = None,
    n_waypoints: int = 100,
    max_duration_s: float = 1800.0,
) -> SweepResult:
    """Fly runs_per_level seeded courses at every latency level.

    Course seeds depend only on (base_seed, run index), so every level flies
    the same paired set of courses and level comparisons are free of course-
    shape variance. Flights that do not reach the destination within the
    duration budget are recorded as incomplete and excluded from the
    per-level means. The whole sweep is deterministic in (params, base_seed).
    """
    if runs_per_level < 1:
        raise ValueError("runs_per_level must be >= 1")
    base_cfg = cfg if cfg is not None else SimConfig()
    zero = ZeroReference()
    runs: list[SweepRun] = []
    aggregates: list[LevelAggregate] = []
    for level in levels:
        level_cfg = with_gain(base_cfg, level.gain)
        reports: list[MetricsReport] = []
        completed_count = 0
        for run_index in range(runs_per_level):
            course_seed = mix_seed(base_seed, run_index) % (1 << 63)
            course = generate_course(course_seed, n_waypoints, altitude_m=base_cfg.altitude_m)
            pilot = SyntheticPilot(
                replace(params, seed=mix_seed(base_seed, run_index, 1)),
                course,
                level_cfg,
            )
            samples, completed = fly_course(
                course, level_cfg, pilot, zero, max_duration_s=max_duration_s
            )
            report = None
            if completed:
                completed_count += 1
                log = FlightLog(
                    session_id=f"sweep-L{level.level}-r{run_index}",
                    latency_level=level.level,
                    course_seed=course_seed,
                    cfg=level_cfg,
                    samples=samples,
                    completed=True,
                )
                report = metrics_report(log, course)
                reports.append(report)
            runs.append(
                SweepRun(
                    level=level.level,
                    gain=level.gain,
                    run_index=run_index,
                    course_seed=course_seed,
                    completed=completed,
                    metrics=report,
                )
            )
        if reports:
            mean_T, sd_T = _mean_sd([r.T_s for r in reports])
            mean_S, sd_S = _mean_sd([r.S_mps for r in reports])
            mean_D, sd_D = _mean_sd([r.D_m for r in reports])
            mean_Nw, _ = _mean_sd([float(r.N_w) for r in reports])
            mean_Nc, _ = _mean_sd([float(r.N_c) for r in reports])
        else:
            mean_T = sd_T = mean_S = sd_S = mean_D = sd_D = mean_Nw = mean_Nc = math.nan
        aggregates.append(
            LevelAggregate(
                level=level.level,
                gain=level.gain,
                n_runs=runs_per_level,
                n_completed=completed_count,
                mean_T_s=mean_T,
                sd_T_s=sd_T,
                mean_S_mps=mean_S,
                sd_S_mps=sd_S,
                mean_D_m=mean_D,
                sd_D_m=sd_D,
                mean_N_w=mean_Nw,
                mean_N_c=mean_Nc,
            )
        )
    return SweepResult(runs=tuple(runs), aggregates=tuple(aggregates))


def sweep_to_csv(result: SweepResult, path: str) -> None:
    """Per-run rows followed by nothing; aggregates go to a sibling file."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "gain", "run", "course_seed", "completed", "T_s", "S_mps", "D_m", "N_w", "N_c"])
        for run in result.runs:
            m = run.metrics
            writer.writerow(
                [
                    run.level,
                    run.gain,
                    run.run_index,
                    run.course_seed,
                    int(run.completed),
                    f"{m.T_s:.6f}" if m else "",
                    f"{m.S_mps:.6f}" if m else "",
                    f"{m.D_m:.6f}" if m else "",
                    m.N_w if m else "",
                    m.N_c if m else "",
                ]
            )


def aggregates_to_csv(result: SweepResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["level", "gain", "n_runs", "n_completed", "mean_T_s", "sd_T_s", "mean_S_mps", "sd_S_mps",
             "mean_D_m", "sd_D_m", "mean_N_w", "mean_N_c"]
        )
        for agg in result.aggregates:
            writer.writerow(
                [agg.level, agg.gain, agg.n_runs, agg.n_completed,
                 f"{agg.mean_T_s:.6f}", f"{agg.sd_T_s:.6f}", f"{agg.mean_S_mps:.6f}", f"{agg.sd_S_mps:.6f}",
                 f"{agg.mean_D_m:.6f}", f"{agg.sd_D_m:.6f}", f"{agg.mean_N_w:.2f}", f"{agg.mean_N_c:.2f}"]
            )
