"""Fixed-timestep tilt-and-translate quadcopter simulation.

The vehicle flies at a constant altitude. Pitch and roll each follow a
first-order lag toward their commanded setpoints; tilt drives lateral and
longitudinal acceleration with a velocity-proportional drag term. Angles are
degrees, distances meters, time seconds. Every step is a pure function of
(state, input, config), so replaying the same inputs reproduces a flight
bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

DRAG_ODE_PER_SECOND = "ode_per_second"
DRAG_PER_TICK = "per_tick"
DRAG_MODES = (DRAG_ODE_PER_SECOND, DRAG_PER_TICK)


@dataclass(frozen=True, slots=True)
class Attitude:
    """Vehicle tilt in degrees."""

    pitch_deg: float = 0.0
    roll_deg: float = 0.0


@dataclass(frozen=True, slots=True)
class ControlInput:
    """Desired pitch/roll setpoints in degrees (pre- or post-clamp)."""

    pitch_setpoint_deg: float = 0.0
    roll_setpoint_deg: float = 0.0


@dataclass(frozen=True, slots=True)
class QuadState:
    """Snapshot of the vehicle at one tick. Immutable; safe to share."""

    x_m: float = 0.0
    z_m: float = 0.0
    y_m: float = 6.0
    vx_mps: float = 0.0
    vz_mps: float = 0.0
    attitude: Attitude = Attitude()
    t_s: float = 0.0


@dataclass(frozen=True, slots=True)
class SimConfig:
    """Simulation constants.

    gain_pitch/gain_roll set how fast tilt converges to its setpoint and are
    the latency knob: lower gain, longer rise time. drag_mode selects how the
    drag coefficient is applied: "ode_per_second" reads the translation
    equation literally (terminal speed max_accel/drag = 200 m/s with
    defaults), "per_tick" applies drag per frame, giving the plausible
    ~2.67 m/s terminal speed. Gains must satisfy gain/tick_rate < 1 so the
    discrete tilt response is monotone and never overshoots.
    """

    tick_rate_hz: float = 75.0
    gain_pitch: float = 32.5
    gain_roll: float = 32.5
    max_accel_mps2: float = 10.0
    drag_coeff: float = 0.05
    drag_mode: str = DRAG_PER_TICK
    tilt_limit_deg: float = 10.0
    altitude_m: float = 6.0

    def __post_init__(self) -> None:
        for name in (
            "tick_rate_hz",
            "gain_pitch",
            "gain_roll",
            "max_accel_mps2",
            "drag_coeff",
            "tilt_limit_deg",
            "altitude_m",
        ):
            value = getattr(self, name)
            if not (value > 0.0):
                raise ValueError(f"SimConfig.{name} must be strictly positive, got {value!r}")
        if self.drag_mode not in DRAG_MODES:
            raise ValueError(f"SimConfig.drag_mode must be one of {DRAG_MODES}, got {self.drag_mode!r}")
        dt = 1.0 / self.tick_rate_hz
        if self.gain_pitch * dt >= 1.0 or self.gain_roll * dt >= 1.0:
            raise ValueError(
                "gain/tick_rate must be < 1 for a monotone, non-overshooting step response "
                f"(gain_pitch*dt={self.gain_pitch * dt:.4g}, gain_roll*dt={self.gain_roll * dt:.4g})"
            )

    @property
    def dt_s(self) -> float:
        return 1.0 / self.tick_rate_hz


def initial_state(cfg: SimConfig) -> QuadState:
    """Vehicle at rest at the origin, parked at the configured altitude."""
    return QuadState(y_m=cfg.altitude_m)


def clamp_setpoint(inp: ControlInput, cfg: SimConfig) -> ControlInput:
    """Clamp both setpoints to [-tilt_limit, +tilt_limit]. Total function."""
    lim = cfg.tilt_limit_deg
    p = inp.pitch_setpoint_deg
    r = inp.roll_setpoint_deg
    p = -lim if p < -lim else lim if p > lim else p
    r = -lim if r < -lim else lim if r > lim else r
    if p == inp.pitch_setpoint_deg and r == inp.roll_setpoint_deg:
        return inp
    return ControlInput(p, r)


def tilt_step(att: Attitude, inp: ControlInput, cfg: SimConfig) -> Attitude:
    """One explicit first-order step of the tilt toward its setpoint.

    pitch' = pitch + gain*(setpoint - pitch)*dt, likewise roll: for a constant
    setpoint the error shrinks by exactly (1 - gain*dt) per tick. Callers are
    expected to pass an already-clamped input.
    """
    dt = 1.0 / cfg.tick_rate_hz
    return Attitude(
        pitch_deg=att.pitch_deg + cfg.gain_pitch * (inp.pitch_setpoint_deg - att.pitch_deg) * dt,
        roll_deg=att.roll_deg + cfg.gain_roll * (inp.roll_setpoint_deg - att.roll_deg) * dt,
    )


def _velocities_after_tick(vx: float, vz: float, att: Attitude, cfg: SimConfig, dt: float) -> tuple[float, float]:
    # Roll drives x, pitch drives z. Yaw is identically zero, so body frame
    # equals world frame.
    tilt_x = att.roll_deg / cfg.tilt_limit_deg
    tilt_z = att.pitch_deg / cfg.tilt_limit_deg
    a = cfg.max_accel_mps2
    d = cfg.drag_coeff
    if cfg.drag_mode == DRAG_ODE_PER_SECOND:
        vx = vx + (tilt_x * a - vx * d) * dt
        vz = vz + (tilt_z * a - vz * d) * dt
    else:
        vx = vx + tilt_x * a * dt - vx * d
        vz = vz + tilt_z * a * dt - vz * d
    return vx, vz


def translate_step(state: QuadState, cfg: SimConfig) -> QuadState:
    """Advance velocity and position one tick from the current attitude.

    Semi-implicit: position integrates the updated velocity. Altitude and
    flight time are untouched; sim_tick owns the clock.
    """
    dt = 1.0 / cfg.tick_rate_hz
    vx, vz = _velocities_after_tick(state.vx_mps, state.vz_mps, state.attitude, cfg, dt)
    return QuadState(
        x_m=state.x_m + vx * dt,
        z_m=state.z_m + vz * dt,
        y_m=state.y_m,
        vx_mps=vx,
        vz_mps=vz,
        attitude=state.attitude,
        t_s=state.t_s,
    )


def sim_tick(state: QuadState, inp: ControlInput, cfg: SimConfig) -> QuadState:
    """One full tick: clamp setpoints, update tilt, translate, advance time.

    Translation reads the post-update attitude. Bit-deterministic: identical
    (state, input, cfg) always produce the identical result.
    """
    u = clamp_setpoint(inp, cfg)
    att = tilt_step(state.attitude, u, cfg)
    dt = 1.0 / cfg.tick_rate_hz
    vx, vz = _velocities_after_tick(state.vx_mps, state.vz_mps, att, cfg, dt)
    return QuadState(
        x_m=state.x_m + vx * dt,
        z_m=state.z_m + vz * dt,
        y_m=state.y_m,
        vx_mps=vx,
        vz_mps=vz,
        attitude=att,
        t_s=state.t_s + dt,
    )


def sim_tick_direct(state: QuadState, inp: ControlInput, cfg: SimConfig) -> QuadState:
    """Zero-latency tick used in training: attitude is the clamped setpoint.

    Bypasses the first-order tilt lag entirely; translation and the clock
    behave exactly as in sim_tick.
    """
    u = clamp_setpoint(inp, cfg)
    att = Attitude(pitch_deg=u.pitch_setpoint_deg, roll_deg=u.roll_setpoint_deg)
    dt = 1.0 / cfg.tick_rate_hz
    vx, vz = _velocities_after_tick(state.vx_mps, state.vz_mps, att, cfg, dt)
    return QuadState(
        x_m=state.x_m + vx * dt,
        z_m=state.z_m + vz * dt,
        y_m=state.y_m,
        vx_mps=vx,
        vz_mps=vz,
        attitude=att,
        t_s=state.t_s + dt,
    )


# --- plain-text configuration files (key = value) ---------------------------

_FLOAT_KEYS = (
    "tick_rate_hz",
    "gain_pitch",
    "gain_roll",
    "max_accel_mps2",
    "drag_coeff",
    "tilt_limit_deg",
    "altitude_m",
)


def parse_keyvalues(text: str) -> dict[str, str]:
    """Parse 'key = value' lines; '#' starts a comment, blank lines skipped."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def config_from_mapping(items: dict[str, str]) -> SimConfig:
    kwargs: dict[str, object] = {}
    for key, value in items.items():
        if key in _FLOAT_KEYS:
            kwargs[key] = float(value)
        elif key == "drag_mode":
            kwargs[key] = value
        else:
            raise ValueError(f"unknown SimConfig key {key!r}")
    return SimConfig(**kwargs)  # type: ignore[arg-type]


def load_config(path: str) -> SimConfig:
    """Load a SimConfig from a key = value file; keys match the field names."""
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_mapping(parse_keyvalues(fh.read()))


def save_config(cfg: SimConfig, path: str) -> None:
    lines = [f"{key} = {getattr(cfg, key)!r}" for key in _FLOAT_KEYS]
    lines.append(f"drag_mode = {cfg.drag_mode}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def with_gain(cfg: SimConfig, gain: float) -> SimConfig:
    """Copy of cfg with both tilt gains set to the same value."""
    return replace(cfg, gain_pitch=gain, gain_roll=gain)
