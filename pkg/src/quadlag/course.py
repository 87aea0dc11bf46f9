"""Procedural slalom-course generation and course-file serialization.

A course is an ordered run of square waypoints the vehicle must fly through,
followed by a destination volume that ends the flight. Waypoint openings are
2 m x 2 m x 0.1 m, spaced 5 m apart longitudinally, with lateral centers
drawn uniformly from +-5 m by a seeded SplitMix64 stream; the opening is
centered at the 6 m flight altitude so its bottom edge sits at 5 m. The
frame around each opening is decomposed into four boxes for collision tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rng import SplitMix64

INNER_WIDTH_M = 2.0
INNER_HEIGHT_M = 2.0
DEPTH_M = 0.1
FRAME_THICKNESS_M = 0.25
SPACING_M = 5.0
LATERAL_RANGE_M = 5.0
ALTITUDE_M = 6.0
DESTINATION_SIZE_M = 4.0
DESTINATION_OFFSET_M = 5.0

COURSE_FORMAT_HEADER = "# quadlag course v1"


@dataclass(frozen=True, slots=True)
class Box:
    """Closed axis-aligned box; touching boxes count as intersecting."""

    min_x: float
    max_x: float
    min_y: float
    max_y: float
    min_z: float
    max_z: float

    def intersects(self, other: "Box") -> bool:
        return (
            self.min_x <= other.max_x
            and self.max_x >= other.min_x
            and self.min_y <= other.max_y
            and self.max_y >= other.min_y
            and self.min_z <= other.max_z
            and self.max_z >= other.min_z
        )

    def contains_point(self, x: float, y: float, z: float) -> bool:
        return (
            self.min_x <= x <= self.max_x
            and self.min_y <= y <= self.max_y
            and self.min_z <= z <= self.max_z
        )

    def contains_box(self, other: "Box") -> bool:
        return (
            self.min_x <= other.min_x
            and self.max_x >= other.max_x
            and self.min_y <= other.min_y
            and self.max_y >= other.max_y
            and self.min_z <= other.min_z
            and self.max_z >= other.max_z
        )

    @staticmethod
    def centered(cx: float, cy: float, cz: float, sx: float, sy: float, sz: float) -> "Box":
        return Box(cx - sx / 2, cx + sx / 2, cy - sy / 2, cy + sy / 2, cz - sz / 2, cz + sz / 2)


@dataclass(frozen=True, slots=True)
class Waypoint:
    index: int
    center_x_m: float
    center_y_m: float = ALTITUDE_M
    plane_z_m: float = 0.0
    inner_w_m: float = INNER_WIDTH_M
    inner_h_m: float = INNER_HEIGHT_M
    depth_m: float = DEPTH_M
    frame_thickness_m: float = FRAME_THICKNESS_M


@dataclass(frozen=True, slots=True)
class Course:
    waypoints: tuple[Waypoint, ...]
    destination: Box
    seed: int


def opening_box(w: Waypoint) -> Box:
    """The empty inner opening the vehicle must pass through."""
    return Box.centered(w.center_x_m, w.center_y_m, w.plane_z_m, w.inner_w_m, w.inner_h_m, w.depth_m)


def frame_boxes(w: Waypoint) -> tuple[Box, Box, Box, Box]:
    """The four frame bars around the opening: top, bottom, left, right.

    The side bars run the full frame height (they own the corners); the top
    and bottom bars span only the opening width. Interiors never overlap and
    the union together with the opening tiles the outer frame rectangle.
    """
    t = w.frame_thickness_m
    half_w = w.inner_w_m / 2
    half_h = w.inner_h_m / 2
    z0 = w.plane_z_m - w.depth_m / 2
    z1 = w.plane_z_m + w.depth_m / 2
    cx, cy = w.center_x_m, w.center_y_m
    top = Box(cx - half_w, cx + half_w, cy + half_h, cy + half_h + t, z0, z1)
    bottom = Box(cx - half_w, cx + half_w, cy - half_h - t, cy - half_h, z0, z1)
    left = Box(cx - half_w - t, cx - half_w, cy - half_h - t, cy + half_h + t, z0, z1)
    right = Box(cx + half_w, cx + half_w + t, cy - half_h - t, cy + half_h + t, z0, z1)
    return top, bottom, left, right


def _destination_after(last: Waypoint, altitude_m: float) -> Box:
    return Box.centered(
        last.center_x_m,
        altitude_m,
        last.plane_z_m + DESTINATION_OFFSET_M,
        DESTINATION_SIZE_M,
        DESTINATION_SIZE_M,
        DESTINATION_SIZE_M,
    )


def generate_course(seed: int, n_waypoints: int = 100, altitude_m: float = ALTITUDE_M) -> Course:
    """Seeded course: waypoint i at z = 5*i, lateral center uniform on +-5 m.

    The same seed always yields the bit-identical course. The destination is
    a 4 m cube centered at the flight altitude, 5 m past the last waypoint,
    laterally aligned with it.
    """
    if n_waypoints < 1:
        raise ValueError(f"n_waypoints must be >= 1, got {n_waypoints}")
    rng = SplitMix64(seed)
    waypoints = tuple(
        Waypoint(
            index=i,
            center_x_m=rng.uniform(-LATERAL_RANGE_M, LATERAL_RANGE_M),
            center_y_m=altitude_m,
            plane_z_m=SPACING_M * i,
        )
        for i in range(1, n_waypoints + 1)
    )
    return Course(waypoints=waypoints, destination=_destination_after(waypoints[-1], altitude_m), seed=seed)


def make_training_course(altitude_m: float = ALTITUDE_M) -> Course:
    """Single centered waypoint plus destination; deterministic, no seed used."""
    waypoint = Waypoint(index=1, center_x_m=0.0, center_y_m=altitude_m, plane_z_m=SPACING_M)
    return Course(waypoints=(waypoint,), destination=_destination_after(waypoint, altitude_m), seed=0)


def course_to_text(course: Course) -> str:
    """Serialize to the documented plain-text format (one waypoint per line)."""
    lines = [
        COURSE_FORMAT_HEADER,
        f"seed = {course.seed}",
        f"n_waypoints = {len(course.waypoints)}",
        f"altitude_m = {course.waypoints[0].center_y_m!r}",
    ]
    for w in course.waypoints:
        lines.append(f"waypoint {w.index} {w.center_x_m!r} {w.plane_z_m!r}")
    return "\n".join(lines) + "\n"


def course_from_text(text: str) -> Course:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != COURSE_FORMAT_HEADER:
        raise ValueError(f"not a course file (expected leading {COURSE_FORMAT_HEADER!r})")
    meta: dict[str, str] = {}
    records: list[tuple[int, float, float]] = []
    for line in lines[1:]:
        if line.startswith("waypoint "):
            _, idx, cx, pz = line.split()
            records.append((int(idx), float(cx), float(pz)))
        else:
            key, value = (part.strip() for part in line.split("=", 1))
            meta[key] = value
    if not records:
        raise ValueError("course file contains no waypoints")
    altitude = float(meta.get("altitude_m", ALTITUDE_M))
    waypoints = [
        Waypoint(index=idx, center_x_m=cx, center_y_m=altitude, plane_z_m=pz)
        for idx, cx, pz in records
    ]
    expected = int(meta.get("n_waypoints", len(waypoints)))
    if expected != len(waypoints):
        raise ValueError(f"course file declares {expected} waypoints but contains {len(waypoints)}")
    return Course(
        waypoints=tuple(waypoints),
        destination=_destination_after(waypoints[-1], altitude),
        seed=int(meta.get("seed", 0)),
    )


def save_course(course: Course, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(course_to_text(course))


def load_course(path: str) -> Course:
    with open(path, "r", encoding="utf-8") as fh:
        return course_from_text(fh.read())
