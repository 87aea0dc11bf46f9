"""Head-motion quadcopter teleoperation simulator with injectable latency."""

from .calibration import (
    LATENCY_LEVELS,
    GainSolution,
    LatencyLevel,
    RiseTimeCriterion,
    gain_for_latency,
    measure_rise_time,
)
from .course import Box, Course, Waypoint, generate_course, make_training_course
from .flightlog import FlightLog, FlightSample, load_flight_log, save_flight_log
from .headmap import (
    HeadSample,
    MappingConfig,
    ZeroReference,
    calibrate_zero,
    map_continuous,
    map_head,
    map_threshold,
)
from .metrics import MetricsReport, QuadExtent, metrics_report
from .pilot import PilotParams, SyntheticPilot, run_pilot_sweep
from .protocol import SessionEntry, SessionPlan, SessionRecord, build_session_plan, run_session
from .sim import Attitude, ControlInput, QuadState, SimConfig, clamp_setpoint, sim_tick, tilt_step, translate_step
from .ssq import SsqResponse, SsqScore, score_ssq, ssq_delta

__version__ = "0.1.0"
