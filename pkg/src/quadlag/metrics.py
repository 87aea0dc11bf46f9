"""Flight-performance measures computed from a recorded flight log.

Covers task completion time, average speed over the flown polyline, path
smoothness (mean lateral deviation from the chain through waypoint centers),
and per-waypoint pass/collision outcomes against the axis-aligned vehicle
bounding box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .course import Box, Course, frame_boxes, opening_box
from .flightlog import FlightLog


@dataclass(frozen=True, slots=True)
class QuadExtent:
    """Axis-aligned vehicle bounding box, a typical civilian quadcopter."""

    width_m: float = 0.3
    height_m: float = 0.1
    depth_m: float = 0.3

    def __post_init__(self) -> None:
        if min(self.width_m, self.height_m, self.depth_m) <= 0.0:
            raise ValueError("quad extent dimensions must be positive")


DEFAULT_QUAD = QuadExtent()


@dataclass(frozen=True, slots=True)
class WaypointOutcome:
    passed: bool
    collided: bool


@dataclass(frozen=True, slots=True)
class MetricsReport:
    T_s: float
    S_mps: float
    D_m: float
    N_w: int
    N_c: int
    per_waypoint: tuple[WaypointOutcome, ...]


def completion_time(log: FlightLog) -> float:
    """Duration from the first to the last recorded sample."""
    if len(log.samples) < 2:
        raise ValueError(f"need at least 2 samples to measure a duration, got {len(log.samples)}")
    return log.samples[-1].t_s - log.samples[0].t_s


def path_length(log: FlightLog) -> float:
    """Length of the flown (x, z) polyline."""
    x = np.array([s.x_m for s in log.samples])
    z = np.array([s.z_m for s in log.samples])
    return float(np.sum(np.hypot(np.diff(x), np.diff(z))))


def average_speed(log: FlightLog) -> float:
    """Total path length divided by completion time; 0 for a pure hover."""
    duration = completion_time(log)
    if duration <= 0.0:
        raise ValueError("flight has zero duration")
    return path_length(log) / duration


def optimal_chain(course: Course, start_x: float = 0.0, start_z: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """The piecewise-linear reference path: start position, then every center."""
    z_knots = np.concatenate(([start_z], [w.plane_z_m for w in course.waypoints]))
    x_knots = np.concatenate(([start_x], [w.center_x_m for w in course.waypoints]))
    return z_knots, x_knots


def path_smoothness(log: FlightLog, course: Course) -> float:
    """Mean |lateral deviation| from the optimal chain, interpolated in z.

    Only samples whose z lies within the chain's z-range contribute; each
    sample's own z is used as-is, so backtracking segments are charged too.
    """
    if not course.waypoints:
        raise ValueError("course has no waypoints")
    z_knots, x_knots = optimal_chain(course)
    z = np.array([s.z_m for s in log.samples])
    x = np.array([s.x_m for s in log.samples])
    in_range = (z >= z_knots[0]) & (z <= z_knots[-1])
    if not np.any(in_range):
        raise ValueError("no samples within the reference chain's z-range")
    x_opt = np.interp(z[in_range], z_knots, x_knots)
    return float(np.mean(np.abs(x[in_range] - x_opt)))


def _first_forward_crossing(z: np.ndarray, plane_z: float) -> int | None:
    """Index i of the first tick with z[i-1] < plane <= z[i], or None."""
    hits = np.nonzero((z[:-1] < plane_z) & (z[1:] >= plane_z))[0]
    if hits.size == 0:
        return None
    return int(hits[0]) + 1


def detect_passes_and_collisions(
    log: FlightLog,
    course: Course,
    quad: QuadExtent = DEFAULT_QUAD,
) -> list[WaypointOutcome]:
    """Per-waypoint outcomes from the sampled trajectory.

    passed: at the first forward crossing of the waypoint plane (position
    linearly interpolated between the straddling ticks) the vehicle box fits
    entirely inside the inner opening in x and y.

    collided: at any tick, or at the interpolated crossing instant, the
    vehicle box intersects one of the four frame bars; debounced to at most
    one event per waypoint.
    """
    z = np.array([s.z_m for s in log.samples])
    x = np.array([s.x_m for s in log.samples])
    altitude = log.cfg.altitude_m
    half_w = quad.width_m / 2
    half_h = quad.height_m / 2
    half_d = quad.depth_m / 2
    quad_y0 = altitude - half_h
    quad_y1 = altitude + half_h

    outcomes: list[WaypointOutcome] = []
    for w in course.waypoints:
        opening = opening_box(w)
        bars = frame_boxes(w)

        # Pass test at the interpolated crossing instant.
        passed = False
        cross_x: float | None = None
        i = _first_forward_crossing(z, w.plane_z_m)
        if i is not None:
            z0, z1 = z[i - 1], z[i]
            frac = 0.0 if z1 == z0 else (w.plane_z_m - z0) / (z1 - z0)
            cross_x = float(x[i - 1] + (x[i] - x[i - 1]) * frac)
            fits_x = opening.min_x <= cross_x - half_w and cross_x + half_w <= opening.max_x
            fits_y = opening.min_y <= quad_y0 and quad_y1 <= opening.max_y
            passed = fits_x and fits_y

        # Collision test over every tick near the waypoint plane.
        near = np.abs(z - w.plane_z_m) <= half_d + w.depth_m / 2
        collided = False
        if np.any(near):
            xs = x[near]
            for bar in bars:
                if bar.min_y > quad_y1 or bar.max_y < quad_y0:
                    continue
                hit = (xs + half_w >= bar.min_x) & (xs - half_w <= bar.max_x)
                if np.any(hit):
                    collided = True
                    break
        if not collided and cross_x is not None:
            quad_box = Box(
                cross_x - half_w, cross_x + half_w,
                quad_y0, quad_y1,
                w.plane_z_m - half_d, w.plane_z_m + half_d,
            )
            collided = any(quad_box.intersects(bar) for bar in bars)

        outcomes.append(WaypointOutcome(passed=passed, collided=collided))
    return outcomes


def metrics_report(log: FlightLog, course: Course, quad: QuadExtent = DEFAULT_QUAD) -> MetricsReport:
    """Bundle all flight measures for one log. Deterministic."""
    outcomes = detect_passes_and_collisions(log, course, quad)
    return MetricsReport(
        T_s=completion_time(log),
        S_mps=average_speed(log),
        D_m=path_smoothness(log, course),
        N_w=sum(1 for o in outcomes if o.passed),
        N_c=sum(1 for o in outcomes if o.collided),
        per_waypoint=tuple(outcomes),
    )
