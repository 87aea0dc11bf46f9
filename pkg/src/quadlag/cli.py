"""Command-line interface.

Subcommands: calibrate, serve, run-session, pilot-sweep, metrics, export,
make-plan, make-course. The data directory and service port can also come
from the QUADLAG_DATA_DIR and QUADLAG_PORT environment variables.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import calibration, course as course_mod, export as export_mod, pilot as pilot_mod
from .metrics import metrics_report
from .flightlog import load_flight_log
from .protocol import (
    SessionRecorder,
    build_session_plan,
    load_plans,
    run_session,
    save_plans,
    training_entry,
)
from .headmap import MappingConfig, load_mapping
from .service import ServeConfig, serve
from .sim import SimConfig, load_config

ENV_DATA_DIR = "QUADLAG_DATA_DIR"
ENV_PORT = "QUADLAG_PORT"


def _default_data_dir() -> str:
    return os.environ.get(ENV_DATA_DIR, "quadlag-data")


def _default_port() -> int:
    return int(os.environ.get(ENV_PORT, "8750"))


def _sim_config(args: argparse.Namespace) -> SimConfig:
    if getattr(args, "sim_config", None):
        return load_config(args.sim_config)
    return SimConfig()


def _mapping_config(args: argparse.Namespace) -> MappingConfig:
    if getattr(args, "mapping_config", None):
        return load_mapping(args.mapping_config)
    return MappingConfig()


def cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = _sim_config(args)
    crit = calibration.RiseTimeCriterion(epsilon_deg=args.epsilon)
    targets = [float(t) for t in args.target] if args.target else None
    rows = calibration.calibration_table(cfg, crit, targets)
    lines = ["level,gain,target_latency_s,measured_rise_s"]
    for row in rows:
        level = "" if row.level is None else str(row.level)
        lines.append(f"{level},{row.gain:.6g},{row.target_latency_s:.6g},{row.measured_rise_s:.6g}")
    text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.csv}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = ServeConfig(
        host=args.host,
        port=args.port,
        data_dir=args.data_dir,
        plan_path=args.plan,
        sim=_sim_config(args),
        mapping=_mapping_config(args),
        realtime=not args.no_realtime,
        n_waypoints=args.waypoints,
    )
    print(f"serving on ws://{cfg.host}:{cfg.port}/ws (data dir: {cfg.data_dir})")
    serve(cfg)
    return 0


def cmd_run_session(args: argparse.Namespace) -> int:
    plans = load_plans(args.plan)
    plan = next((p for p in plans if p.participant_id == args.participant), None)
    if plan is None:
        print(f"no plan for participant {args.participant!r}", file=sys.stderr)
        return 1
    cfg = _sim_config(args)
    recorder = SessionRecorder(args.data_dir)
    entries = []
    if args.day == 1 and plan.training_on_first_day and not args.skip_training:
        entries.append(training_entry(plan))
    entries.append(plan.entry_for_day(args.day))
    for entry in entries:
        course = (
            course_mod.make_training_course(cfg.altitude_m)
            if entry.training
            else course_mod.generate_course(entry.course_seed, args.waypoints, cfg.altitude_m)
        )
        pilot = pilot_mod.SyntheticPilot(
            pilot_mod.PilotParams(seed=entry.course_seed), course, cfg
        )
        record = run_session(
            entry, pilot, recorder=recorder, cfg=cfg, course=course, mapping=_mapping_config(args)
        )
        kind = "training" if entry.training else f"level {entry.latency_level}"
        if record.metrics:
            m = record.metrics
            print(
                f"{entry.participant_id} day {entry.day_index} ({kind}): {record.status}, "
                f"T={m.T_s:.1f}s S={m.S_mps:.2f}m/s D={m.D_m:.2f}m N_w={m.N_w} N_c={m.N_c}"
            )
        else:
            print(f"{entry.participant_id} day {entry.day_index} ({kind}): {record.status}")
    return 0


def cmd_pilot_sweep(args: argparse.Namespace) -> int:
    levels = tuple(
        calibration.level_by_ordinal(int(v)) for v in args.levels.replace("..", ",").split(",") if v
    )
    if ".." in args.levels:
        lo, hi = (int(v) for v in args.levels.split(".."))
        levels = tuple(calibration.level_by_ordinal(v) for v in range(lo, hi + 1))
    params = pilot_mod.PilotParams(
        reaction_delay_s=args.reaction_delay, noise_deg=args.noise, seed=args.seed
    )
    result = pilot_mod.run_pilot_sweep(
        params,
        levels=levels,
        runs_per_level=args.runs,
        base_seed=args.seed,
        n_waypoints=args.waypoints,
    )
    pilot_mod.sweep_to_csv(result, args.out)
    agg_path = args.out.replace(".csv", "") + "_aggregates.csv"
    pilot_mod.aggregates_to_csv(result, agg_path)
    print(f"wrote {args.out} and {agg_path}")
    for agg in result.aggregates:
        print(
            f"level {agg.level}: {agg.n_completed}/{agg.n_runs} completed, "
            f"mean T={agg.mean_T_s:.1f}s S={agg.mean_S_mps:.3f}m/s D={agg.mean_D_m:.2f}m"
        )
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    log = load_flight_log(args.log)
    course = (
        course_mod.load_course(args.course)
        if args.course
        else course_mod.generate_course(log.course_seed, args.waypoints, log.cfg.altitude_m)
    )
    report = metrics_report(log, course)
    print(f"T   = {report.T_s:.3f} s")
    print(f"S   = {report.S_mps:.3f} m/s")
    print(f"D   = {report.D_m:.3f} m")
    print(f"N_w = {report.N_w}")
    print(f"N_c = {report.N_c}")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    paths = export_mod.export_csv(args.data_dir, args.out_dir)
    for name, path in paths.items():
        print(f"wrote {path}")
    return 0


def cmd_make_plan(args: argparse.Namespace) -> int:
    participants = args.participants.split(",")
    plans = build_session_plan(participants, args.seed, replicate_table=args.replicate)
    save_plans(plans, args.out, seed=args.seed)
    print(f"wrote {args.out} ({len(plans)} participants)")
    return 0


def cmd_make_course(args: argparse.Namespace) -> int:
    course = course_mod.generate_course(args.seed, args.waypoints)
    course_mod.save_course(course, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadlag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="print the gain/latency calibration table")
    p.add_argument("--target", action="append", help="latency target in seconds (repeatable)")
    p.add_argument("--epsilon", type=float, default=0.018, help="convergence threshold in degrees")
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.add_argument("--sim-config", help="key=value simulation config file")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("serve", help="run the live telemetry service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=_default_port())
    p.add_argument("--plan", help="session plan file")
    p.add_argument("--data-dir", default=_default_data_dir())
    p.add_argument("--waypoints", type=int, default=100)
    p.add_argument("--no-realtime", action="store_true", help="tick as fast as possible (testing)")
    p.add_argument("--sim-config", help="key=value simulation config file")
    p.add_argument("--mapping-config", help="key=value control-mapping config file")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("run-session", help="run one planned session with the synthetic pilot")
    p.add_argument("--plan", required=True)
    p.add_argument("--participant", required=True)
    p.add_argument("--day", type=int, required=True)
    p.add_argument("--data-dir", default=_default_data_dir())
    p.add_argument("--waypoints", type=int, default=100)
    p.add_argument("--skip-training", action="store_true")
    p.add_argument("--sim-config", help="key=value simulation config file")
    p.add_argument("--mapping-config", help="key=value control-mapping config file")
    p.set_defaults(func=cmd_run_session)

    p = sub.add_parser("pilot-sweep", help="fly seeded sweeps across latency levels")
    p.add_argument("--levels", default="1..5", help="e.g. 1..5 or 1,3,5")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--waypoints", type=int, default=100)
    p.add_argument("--reaction-delay", type=float, default=0.2)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_pilot_sweep)

    p = sub.add_parser("metrics", help="compute measures for a recorded flight log")
    p.add_argument("--log", required=True)
    p.add_argument("--course", help="course file; regenerated from the log's seed when omitted")
    p.add_argument("--waypoints", type=int, default=100)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("export", help="export analysis CSVs from a data directory")
    p.add_argument("--data-dir", default=_default_data_dir())
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("make-plan", help="write a session plan file")
    p.add_argument("--participants", default="P1,P2,P3,P4,P5,P6,P7,P8,P9")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicate", action="store_true", help="use the published session orders")
    p.add_argument("--out", default="plan.txt")
    p.set_defaults(func=cmd_make_plan)

    p = sub.add_parser("make-course", help="write a course file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--waypoints", type=int, default=100)
    p.add_argument("--out", default="course.txt")
    p.set_defaults(func=cmd_make_course)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
