"""Analysis-ready CSV export and SSQ/flight aggregation.

Scans a session data directory, emits one per-flight CSV plus aggregate
tables grouped by latency level and by session order (mean and SD of the
flight measures and SSQ scores, and the group totals of waypoints passed and
collisions). Inferential statistics stay external; these files are the input
to them.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from dataclasses import dataclass

import numpy as np

log = logging.getLogger("quadlag.export")

PER_FLIGHT_CSV = "per_flight.csv"
BY_LATENCY_CSV = "by_latency.csv"
BY_SESSION_CSV = "by_session.csv"


@dataclass(frozen=True, slots=True)
class FlightRow:
    participant: str
    day_index: int
    latency_level: int
    training: bool
    status: str
    T_s: float
    S_mps: float
    D_m: float
    N_w: int
    N_c: int
    ssq_pre_total: float | None
    ssq_post_total: float | None

    @property
    def ssq_delta_total(self) -> float | None:
        if self.ssq_pre_total is None or self.ssq_post_total is None:
            return None
        return self.ssq_post_total - self.ssq_pre_total


def _parse_session_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _score_total(value: str | None) -> float | None:
    if value is None:
        return None
    return float(value.split(",")[-1])


def collect_rows(data_dir: str) -> list[FlightRow]:
    """All readable session records under data_dir; unreadable ones are skipped."""
    rows: list[FlightRow] = []
    for participant in sorted(os.listdir(data_dir)):
        p_dir = os.path.join(data_dir, participant)
        if not os.path.isdir(p_dir):
            continue
        for session_name in sorted(os.listdir(p_dir)):
            path = os.path.join(p_dir, session_name, "session.txt")
            if not os.path.isfile(path):
                continue
            try:
                fields = _parse_session_file(path)
                rows.append(
                    FlightRow(
                        participant=fields["participant"],
                        day_index=int(fields["day_index"]),
                        latency_level=int(fields["latency_level"]),
                        training=fields.get("training", "false") == "true",
                        status=fields.get("status", ""),
                        T_s=float(fields["T_s"]),
                        S_mps=float(fields["S_mps"]),
                        D_m=float(fields["D_m"]),
                        N_w=int(fields["N_w"]),
                        N_c=int(fields["N_c"]),
                        ssq_pre_total=_score_total(fields.get("ssq_pre_scores")),
                        ssq_post_total=_score_total(fields.get("ssq_post_scores")),
                    )
                )
            except (KeyError, ValueError) as exc:
                log.warning("skipping unreadable session record %s: %s", path, exc)
    return rows


def _mean_sd(values: list[float]) -> tuple[float, float]:
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1)) if arr.size > 1 else 0.0


_GROUP_FIELDS = [
    "n",
    "mean_T_s",
    "sd_T_s",
    "mean_S_mps",
    "sd_S_mps",
    "mean_D_m",
    "sd_D_m",
    "S_w",
    "S_c",
    "mean_ssq_post_total",
    "sd_ssq_post_total",
    "mean_ssq_delta_total",
    "sd_ssq_delta_total",
]


def _group_stats(rows: list[FlightRow]) -> dict[str, float]:
    mean_T, sd_T = _mean_sd([r.T_s for r in rows])
    mean_S, sd_S = _mean_sd([r.S_mps for r in rows])
    mean_D, sd_D = _mean_sd([r.D_m for r in rows])
    post = [r.ssq_post_total for r in rows if r.ssq_post_total is not None]
    delta = [r.ssq_delta_total for r in rows if r.ssq_delta_total is not None]
    mean_post, sd_post = _mean_sd(post)
    mean_delta, sd_delta = _mean_sd(delta)
    return {
        "n": len(rows),
        "mean_T_s": mean_T,
        "sd_T_s": sd_T,
        "mean_S_mps": mean_S,
        "sd_S_mps": sd_S,
        "mean_D_m": mean_D,
        "sd_D_m": sd_D,
        "S_w": sum(r.N_w for r in rows),
        "S_c": sum(r.N_c for r in rows),
        "mean_ssq_post_total": mean_post,
        "sd_ssq_post_total": sd_post,
        "mean_ssq_delta_total": mean_delta,
        "sd_ssq_delta_total": sd_delta,
    }


def export_csv(data_dir: str, out_dir: str | None = None) -> dict[str, str]:
    """Write per-flight and aggregate CSVs; returns the written paths.

    Raises ValueError when the data directory holds no readable records.
    Training flights appear in the per-flight table but are excluded from
    the latency/session aggregates.
    """
    rows = collect_rows(data_dir)
    if not rows:
        raise ValueError(f"no session records found under {data_dir!r}")
    out_dir = out_dir or data_dir
    os.makedirs(out_dir, exist_ok=True)
    paths: dict[str, str] = {}

    per_flight_path = os.path.join(out_dir, PER_FLIGHT_CSV)
    with open(per_flight_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["participant", "session_index", "latency_level", "training", "status",
             "T_s", "S_mps", "D_m", "N_w", "N_c",
             "ssq_pre_total", "ssq_post_total", "ssq_delta_total"]
        )
        for r in rows:
            writer.writerow(
                [r.participant, r.day_index, r.latency_level, int(r.training), r.status,
                 repr(r.T_s), repr(r.S_mps), repr(r.D_m), r.N_w, r.N_c,
                 "" if r.ssq_pre_total is None else repr(r.ssq_pre_total),
                 "" if r.ssq_post_total is None else repr(r.ssq_post_total),
                 "" if r.ssq_delta_total is None else repr(r.ssq_delta_total)]
            )
    paths[PER_FLIGHT_CSV] = per_flight_path

    flights = [r for r in rows if not r.training]

    def write_grouped(path: str, key_name: str, key_of) -> None:
        keys = sorted({key_of(r) for r in flights})
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([key_name] + _GROUP_FIELDS)
            for key in keys:
                stats = _group_stats([r for r in flights if key_of(r) == key])
                writer.writerow([key] + [stats[f] for f in _GROUP_FIELDS])

    by_latency_path = os.path.join(out_dir, BY_LATENCY_CSV)
    write_grouped(by_latency_path, "latency_level", lambda r: r.latency_level)
    paths[BY_LATENCY_CSV] = by_latency_path

    by_session_path = os.path.join(out_dir, BY_SESSION_CSV)
    write_grouped(by_session_path, "session_index", lambda r: r.day_index)
    paths[BY_SESSION_CSV] = by_session_path
    return paths
