"""Flight-log records and their line-delimited file format.

One log holds the per-tick samples of a single flight. The file format is a
header of '# key = value' lines (session metadata plus the full simulation
config) followed by one 't x z pitch roll' line per sample. Floats are
written with repr so a load reproduces the recorded values bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .sim import SimConfig

LOG_FORMAT_HEADER = "# quadlag flightlog v1"


@dataclass(frozen=True, slots=True)
class FlightSample:
    t_s: float
    x_m: float
    z_m: float
    pitch_deg: float
    roll_deg: float


@dataclass(slots=True)
class FlightLog:
    """Samples of one flight plus the context needed to recompute metrics."""

    session_id: str
    latency_level: int
    course_seed: int
    cfg: SimConfig
    samples: list[FlightSample] = field(default_factory=list)
    completed: bool = False


def flight_log_to_text(log: FlightLog) -> str:
    lines = [
        LOG_FORMAT_HEADER,
        f"# session_id = {log.session_id}",
        f"# latency_level = {log.latency_level}",
        f"# course_seed = {log.course_seed}",
        f"# completed = {'true' if log.completed else 'false'}",
        f"# cfg.tick_rate_hz = {log.cfg.tick_rate_hz!r}",
        f"# cfg.gain_pitch = {log.cfg.gain_pitch!r}",
        f"# cfg.gain_roll = {log.cfg.gain_roll!r}",
        f"# cfg.max_accel_mps2 = {log.cfg.max_accel_mps2!r}",
        f"# cfg.drag_coeff = {log.cfg.drag_coeff!r}",
        f"# cfg.drag_mode = {log.cfg.drag_mode}",
        f"# cfg.tilt_limit_deg = {log.cfg.tilt_limit_deg!r}",
        f"# cfg.altitude_m = {log.cfg.altitude_m!r}",
    ]
    for s in log.samples:
        lines.append(f"{s.t_s!r} {s.x_m!r} {s.z_m!r} {s.pitch_deg!r} {s.roll_deg!r}")
    return "\n".join(lines) + "\n"


def flight_log_from_text(text: str) -> FlightLog:
    lines = text.splitlines()
    if not lines or lines[0] != LOG_FORMAT_HEADER:
        raise ValueError(f"not a flight log (expected leading {LOG_FORMAT_HEADER!r})")
    meta: dict[str, str] = {}
    samples: list[FlightSample] = []
    for line in lines[1:]:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, value = (part.strip() for part in line[1:].split("=", 1))
            meta[key] = value
        else:
            t, x, z, pitch, roll = (float(part) for part in line.split())
            samples.append(FlightSample(t, x, z, pitch, roll))
    cfg = SimConfig(
        tick_rate_hz=float(meta["cfg.tick_rate_hz"]),
        gain_pitch=float(meta["cfg.gain_pitch"]),
        gain_roll=float(meta["cfg.gain_roll"]),
        max_accel_mps2=float(meta["cfg.max_accel_mps2"]),
        drag_coeff=float(meta["cfg.drag_coeff"]),
        drag_mode=meta["cfg.drag_mode"],
        tilt_limit_deg=float(meta["cfg.tilt_limit_deg"]),
        altitude_m=float(meta["cfg.altitude_m"]),
    )
    return FlightLog(
        session_id=meta.get("session_id", ""),
        latency_level=int(meta.get("latency_level", 0)),
        course_seed=int(meta.get("course_seed", 0)),
        cfg=cfg,
        samples=samples,
        completed=meta.get("completed", "false") == "true",
    )


def save_flight_log(log: FlightLog, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(flight_log_to_text(log))


def load_flight_log(path: str) -> FlightLog:
    with open(path, "r", encoding="utf-8") as fh:
        return flight_log_from_text(fh.read())
