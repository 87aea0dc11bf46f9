"""Simulator Sickness Questionnaire administration and scoring.

Sixteen symptoms rated 0-3, scored into Nausea, Oculomotor and
Disorientation subscales plus a Total, using the published weight table
shipped as a data file (see data/ssq_items.csv for provenance). Because the
instrument is administered before and after each session, both the post-only
scores and the post-minus-pre difference are reported.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from importlib import resources

PHASE_PRE = "pre"
PHASE_POST = "post"
PHASES = (PHASE_PRE, PHASE_POST)

N_ITEMS = 16
_DATA_FILE = "ssq_items.csv"


@dataclass(frozen=True, slots=True)
class SsqItem:
    index: int
    symptom: str
    in_nausea: bool
    in_oculomotor: bool
    in_disorientation: bool


@dataclass(frozen=True, slots=True)
class ScoringTable:
    items: tuple[SsqItem, ...]
    weight_nausea: float
    weight_oculomotor: float
    weight_disorientation: float
    weight_total: float
    sha256: str


_TABLE: ScoringTable | None = None


def scoring_table_text() -> str:
    return resources.files("quadlag.data").joinpath(_DATA_FILE).read_text(encoding="utf-8")


def load_scoring_table() -> ScoringTable:
    """Parse (and cache) the published weight table from the data file."""
    global _TABLE
    if _TABLE is not None:
        return _TABLE
    text = scoring_table_text()
    weights: dict[str, float] = {}
    rows: list[str] = []
    for line in text.splitlines():
        if line.startswith("# weight "):
            _, _, name, value = line.split()
            weights[name] = float(value)
        elif not line.startswith("#") and line.strip():
            rows.append(line)
    items = tuple(
        SsqItem(
            index=int(row["item"]),
            symptom=row["symptom"],
            in_nausea=row["nausea"] == "1",
            in_oculomotor=row["oculomotor"] == "1",
            in_disorientation=row["disorientation"] == "1",
        )
        for row in csv.DictReader(rows)
    )
    if len(items) != N_ITEMS:
        raise ValueError(f"scoring table must define {N_ITEMS} items, found {len(items)}")
    _TABLE = ScoringTable(
        items=items,
        weight_nausea=weights["nausea"],
        weight_oculomotor=weights["oculomotor"],
        weight_disorientation=weights["disorientation"],
        weight_total=weights["total"],
        sha256=hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )
    return _TABLE


@dataclass(frozen=True, slots=True)
class SsqResponse:
    """One filled questionnaire: 16 ratings in {0,1,2,3} plus context."""

    items: tuple[int, ...]
    phase: str
    session_id: str = ""

    def __post_init__(self) -> None:
        if len(self.items) != N_ITEMS:
            raise ValueError(f"expected {N_ITEMS} item ratings, got {len(self.items)}")
        for i, rating in enumerate(self.items, start=1):
            if rating not in (0, 1, 2, 3):
                raise ValueError(f"item {i} rating must be 0..3, got {rating!r}")
        if self.phase not in PHASES:
            raise ValueError(f"phase must be one of {PHASES}, got {self.phase!r}")


@dataclass(frozen=True, slots=True)
class SsqScore:
    nausea: float
    oculomotor: float
    disorientation: float
    total: float


def score_ssq(resp: SsqResponse) -> SsqScore:
    """Weighted subscale and total scores for one response."""
    table = load_scoring_table()
    raw_n = raw_o = raw_d = 0
    for item, rating in zip(table.items, resp.items):
        if item.in_nausea:
            raw_n += rating
        if item.in_oculomotor:
            raw_o += rating
        if item.in_disorientation:
            raw_d += rating
    return SsqScore(
        nausea=raw_n * table.weight_nausea,
        oculomotor=raw_o * table.weight_oculomotor,
        disorientation=raw_d * table.weight_disorientation,
        total=(raw_n + raw_o + raw_d) * table.weight_total,
    )


@dataclass(frozen=True, slots=True)
class SsqDelta:
    """Post-minus-pre difference plus both absolute scores.

    The difference components may be negative; the absolute (post-only)
    scores are reported alongside since either analysis may be wanted.
    """

    delta: SsqScore
    pre: SsqScore
    post: SsqScore


def ssq_delta(pre: SsqResponse, post: SsqResponse) -> SsqDelta:
    """Componentwise post - pre for a matched pre/post pair of one session."""
    if pre.phase != PHASE_PRE or post.phase != PHASE_POST:
        raise ValueError(f"phase mismatch: got ({pre.phase!r}, {post.phase!r}), expected ('pre', 'post')")
    if pre.session_id != post.session_id:
        raise ValueError(f"session mismatch: {pre.session_id!r} vs {post.session_id!r}")
    pre_score = score_ssq(pre)
    post_score = score_ssq(post)
    return SsqDelta(
        delta=SsqScore(
            nausea=post_score.nausea - pre_score.nausea,
            oculomotor=post_score.oculomotor - pre_score.oculomotor,
            disorientation=post_score.disorientation - pre_score.disorientation,
            total=post_score.total - pre_score.total,
        ),
        pre=pre_score,
        post=post_score,
    )


# --- CSV ingestion -----------------------------------------------------------

CSV_FIELDS = ["participant", "session_id", "phase"] + [f"item{i}" for i in range(1, N_ITEMS + 1)]


def responses_from_csv(path: str) -> list[tuple[str, SsqResponse]]:
    """Read questionnaires, one row each, as (participant, response) pairs."""
    out: list[tuple[str, SsqResponse]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            items = tuple(int(row[f"item{i}"]) for i in range(1, N_ITEMS + 1))
            out.append(
                (row["participant"], SsqResponse(items=items, phase=row["phase"], session_id=row["session_id"]))
            )
    return out


def responses_to_csv(rows: list[tuple[str, SsqResponse]], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for participant, resp in rows:
            writer.writerow([participant, resp.session_id, resp.phase, *resp.items])
