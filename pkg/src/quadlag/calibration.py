"""Conversion between controller gain and visual-and-control latency.

Latency is the rise time of the tilt step response from 0 to the step
setpoint: the first simulation tick at which the remaining error drops below
a convergence threshold. The published level table is reproduced by measuring
the commanded first-order dynamics exactly (per-tick decay factor
exp(-gain*dt)); the forward-Euler integrator the simulation itself runs
converges noticeably faster at the hottest gain (gain*dt = 0.43 at 75 Hz), so
measuring it would understate that level's latency by ~20%. Both response
models are available; "exact" is the default and the calibrated meaning of
"latency level" throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sim import SimConfig

RESPONSE_EXACT = "exact"
RESPONSE_EULER = "euler"
RESPONSE_MODES = (RESPONSE_EXACT, RESPONSE_EULER)


class CalibrationError(RuntimeError):
    """Raised when a rise-time measurement or inversion cannot be satisfied."""


@dataclass(frozen=True, slots=True)
class LatencyLevel:
    """One published latency level: ordinal, shared pitch/roll gain, latency."""

    level: int
    gain: float
    latency_s: float


#: The five published (gain, latency) pairs, ordered by level. Higher level
#: means lower gain and longer latency.
LATENCY_LEVELS: tuple[LatencyLevel, ...] = (
    LatencyLevel(1, 32.5, 0.2),
    LatencyLevel(2, 15.6, 0.4),
    LatencyLevel(3, 10.5, 0.6),
    LatencyLevel(4, 7.9, 0.8),
    LatencyLevel(5, 6.5, 1.0),
)


def level_by_ordinal(level: int) -> LatencyLevel:
    for entry in LATENCY_LEVELS:
        if entry.level == level:
            return entry
    raise ValueError(f"latency level must be 1..{len(LATENCY_LEVELS)}, got {level}")


@dataclass(frozen=True, slots=True)
class RiseTimeCriterion:
    """Convergence criterion for the step response.

    epsilon_deg = 0.018 makes ln(step/epsilon) ~ 6.32, the value that fits all
    five published gain*latency products (range 6.24-6.5) simultaneously.
    """

    step_deg: float = 10.0
    epsilon_deg: float = 0.018

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon_deg < self.step_deg):
            raise ValueError(
                f"need 0 < epsilon_deg < step_deg, got epsilon={self.epsilon_deg!r} step={self.step_deg!r}"
            )


DEFAULT_CRITERION = RiseTimeCriterion()


def measure_rise_time(
    gain: float,
    cfg: SimConfig,
    crit: RiseTimeCriterion = DEFAULT_CRITERION,
    response: str = RESPONSE_EXACT,
    max_ticks: int = 200_000,
) -> float:
    """Rise time of the tilt step response, quantized to whole ticks.

    Simulates the step response from 0 toward crit.step_deg and returns n*dt
    for the smallest tick index n at which |step - tilt| < epsilon. The
    "exact" response applies the true first-order decay exp(-gain*dt) per
    tick; "euler" applies the integrator's factor (1 - gain*dt).

    Raises CalibrationError if the criterion is not met within max_ticks.
    """
    if gain <= 0.0:
        raise ValueError(f"gain must be strictly positive, got {gain!r}")
    if response not in RESPONSE_MODES:
        raise ValueError(f"response must be one of {RESPONSE_MODES}, got {response!r}")
    dt = 1.0 / cfg.tick_rate_hz
    if response == RESPONSE_EULER:
        if gain * dt > 1.0:
            raise ValueError(f"euler response needs gain*dt <= 1, got {gain * dt:.4g}")
        decay = 1.0 - gain * dt
    else:
        decay = math.exp(-gain * dt)

    error = crit.step_deg
    for n in range(1, max_ticks + 1):
        error = error * decay
        if error < crit.epsilon_deg:
            return n * dt
    raise CalibrationError(
        f"step response did not converge within {max_ticks} ticks "
        f"(gain={gain}, epsilon={crit.epsilon_deg}, tick_rate={cfg.tick_rate_hz})"
    )


@dataclass(frozen=True, slots=True)
class GainSolution:
    """Result of inverting a latency target: the gain and its realized rise time."""

    gain: float
    target_s: float
    measured_rise_s: float


def gain_for_latency(
    target_s: float,
    cfg: SimConfig,
    crit: RiseTimeCriterion = DEFAULT_CRITERION,
    tolerance: float = 0.10,
) -> GainSolution:
    """Gain whose step response rises in target_s seconds.

    Uses the continuous-time closed form gain = ln(step/epsilon)/target, then
    verifies by measurement that the realized tick-quantized rise time is
    within `tolerance` (relative) of the target. Raises ValueError for targets
    shorter than one tick and CalibrationError if verification fails.
    """
    dt = 1.0 / cfg.tick_rate_hz
    if target_s < dt:
        raise ValueError(f"target {target_s!r} s is shorter than one tick ({dt:.6g} s)")
    gain = math.log(crit.step_deg / crit.epsilon_deg) / target_s
    measured = measure_rise_time(gain, cfg, crit)
    if abs(measured - target_s) > tolerance * target_s:
        raise CalibrationError(
            f"realized rise time {measured:.4g} s deviates more than {tolerance:.0%} "
            f"from target {target_s:.4g} s"
        )
    return GainSolution(gain=gain, target_s=target_s, measured_rise_s=measured)


@dataclass(frozen=True, slots=True)
class CalibrationRow:
    level: int | None
    gain: float
    target_latency_s: float
    measured_rise_s: float


def calibration_table(
    cfg: SimConfig,
    crit: RiseTimeCriterion = DEFAULT_CRITERION,
    targets: list[float] | None = None,
) -> list[CalibrationRow]:
    """Rows of (level, gain, target latency, measured rise time).

    With no targets, reports the five published levels using their published
    gains; with targets, solves each one for a gain first.
    """
    rows: list[CalibrationRow] = []
    if targets is None:
        for entry in LATENCY_LEVELS:
            measured = measure_rise_time(entry.gain, cfg, crit)
            rows.append(CalibrationRow(entry.level, entry.gain, entry.latency_s, measured))
    else:
        for target in targets:
            sol = gain_for_latency(target, cfg, crit)
            rows.append(CalibrationRow(None, sol.gain, target, sol.measured_rise_s))
    return rows
