"""Mapping from tracked head orientation to tilt setpoints.

Two control modes: continuous (head angle minus the calibrated zero offset
drives the setpoint one-to-one, then clamps) and threshold (discrete ON/OFF:
a fixed tilt is commanded once the zeroed head angle passes a threshold).
Yaw is tracked but never mapped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sim import ControlInput, SimConfig, clamp_setpoint


@dataclass(frozen=True, slots=True)
class HeadSample:
    """One tracked head pose, degrees, with the tracker timestamp."""

    pitch_deg: float = 0.0
    roll_deg: float = 0.0
    yaw_deg: float = 0.0
    timestamp_s: float = 0.0


@dataclass(frozen=True, slots=True)
class ZeroReference:
    """Per-axis offsets captured while the pilot holds their head level."""

    pitch_offset_deg: float = 0.0
    roll_offset_deg: float = 0.0


def calibrate_zero(samples: list[HeadSample]) -> ZeroReference:
    """Per-axis mean of the calibration window; subtracted by the mappings."""
    if not samples:
        raise ValueError("calibration needs at least one head sample")
    n = len(samples)
    return ZeroReference(
        pitch_offset_deg=sum(s.pitch_deg for s in samples) / n,
        roll_offset_deg=sum(s.roll_deg for s in samples) / n,
    )


def map_continuous(
    head: HeadSample,
    zero: ZeroReference,
    cfg: SimConfig,
    swap_axes: bool = False,
) -> ControlInput:
    """Zeroed head angles become setpoints one degree per degree, clamped.

    Default pairing is head pitch -> pitch setpoint, head roll -> roll
    setpoint; swap_axes crosses them for rigs mounted sideways.
    """
    pitch = head.pitch_deg - zero.pitch_offset_deg
    roll = head.roll_deg - zero.roll_offset_deg
    if swap_axes:
        pitch, roll = roll, pitch
    return clamp_setpoint(ControlInput(pitch_setpoint_deg=pitch, roll_setpoint_deg=roll), cfg)


def map_threshold(
    head: HeadSample,
    zero: ZeroReference,
    threshold_deg: float,
    fixed_tilt_deg: float,
    cfg: SimConfig,
    swap_axes: bool = False,
) -> ControlInput:
    """Discrete ON/OFF mapping: +-fixed tilt beyond the threshold, else zero."""
    if threshold_deg <= 0.0:
        raise ValueError(f"threshold_deg must be positive, got {threshold_deg!r}")
    if not (0.0 < fixed_tilt_deg <= cfg.tilt_limit_deg):
        raise ValueError(
            f"fixed_tilt_deg must be in (0, {cfg.tilt_limit_deg}], got {fixed_tilt_deg!r}"
        )
    pitch = head.pitch_deg - zero.pitch_offset_deg
    roll = head.roll_deg - zero.roll_offset_deg
    if swap_axes:
        pitch, roll = roll, pitch

    def gate(angle: float) -> float:
        if angle > threshold_deg:
            return fixed_tilt_deg
        if angle < -threshold_deg:
            return -fixed_tilt_deg
        return 0.0

    return ControlInput(pitch_setpoint_deg=gate(pitch), roll_setpoint_deg=gate(roll))


MODE_CONTINUOUS = "continuous"
MODE_THRESHOLD = "threshold"
MAPPING_MODES = (MODE_CONTINUOUS, MODE_THRESHOLD)


@dataclass(frozen=True, slots=True)
class MappingConfig:
    """Session-level control-mapping choices, loadable from a key=value file.

    mode selects continuous (the default one-to-one mapping) or the discrete
    ON/OFF threshold technique; swap_axes crosses the head/vehicle axis
    pairing for sideways rigs.
    """

    mode: str = MODE_CONTINUOUS
    swap_axes: bool = False
    threshold_deg: float = 5.0
    fixed_tilt_deg: float = 10.0

    def __post_init__(self) -> None:
        if self.mode not in MAPPING_MODES:
            raise ValueError(f"mapping mode must be one of {MAPPING_MODES}, got {self.mode!r}")
        if self.threshold_deg <= 0.0 or self.fixed_tilt_deg <= 0.0:
            raise ValueError("threshold_deg and fixed_tilt_deg must be positive")


def map_head(head: HeadSample, zero: ZeroReference, cfg: SimConfig, mapping: MappingConfig) -> ControlInput:
    """Apply the configured control mapping to one head sample."""
    if mapping.mode == MODE_THRESHOLD:
        return map_threshold(
            head, zero, mapping.threshold_deg, mapping.fixed_tilt_deg, cfg, mapping.swap_axes
        )
    return map_continuous(head, zero, cfg, mapping.swap_axes)


def mapping_from_mapping(items: dict[str, str]) -> MappingConfig:
    kwargs: dict[str, object] = {}
    for key, value in items.items():
        if key == "mode":
            kwargs[key] = value
        elif key == "swap_axes":
            if value not in ("true", "false"):
                raise ValueError(f"swap_axes must be true or false, got {value!r}")
            kwargs[key] = value == "true"
        elif key in ("threshold_deg", "fixed_tilt_deg"):
            kwargs[key] = float(value)
        else:
            raise ValueError(f"unknown mapping key {key!r}")
    return MappingConfig(**kwargs)  # type: ignore[arg-type]


def load_mapping(path: str) -> MappingConfig:
    """Load a MappingConfig from a key = value file."""
    from .sim import parse_keyvalues

    with open(path, "r", encoding="utf-8") as fh:
        return mapping_from_mapping(parse_keyvalues(fh.read()))
