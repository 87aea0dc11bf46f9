import hashlib

import pytest

from quadlag.ssq import (
    N_ITEMS,
    SsqResponse,
    SsqScore,
    load_scoring_table,
    responses_from_csv,
    responses_to_csv,
    score_ssq,
    scoring_table_text,
    ssq_delta,
)

# Pinned digest of the shipped weight table; scoring silently changes if this
# file does, so the pin makes any edit deliberate.
TABLE_SHA256 = "acbd7377054012c78355076bc09970f86c91a87e7833e63d4527abf3cd28c18e"


def resp(items, phase="post", session_id="s1"):
    return SsqResponse(items=tuple(items), phase=phase, session_id=session_id)


class TestScoringTable:
    def test_checksum_pinned(self):
        digest = hashlib.sha256(scoring_table_text().encode("utf-8")).hexdigest()
        assert digest == TABLE_SHA256

    def test_cluster_sizes(self):
        table = load_scoring_table()
        assert sum(1 for i in table.items if i.in_nausea) == 7
        assert sum(1 for i in table.items if i.in_oculomotor) == 7
        assert sum(1 for i in table.items if i.in_disorientation) == 7

    def test_weights(self):
        table = load_scoring_table()
        assert (table.weight_nausea, table.weight_oculomotor, table.weight_disorientation, table.weight_total) == (
            9.54, 7.58, 13.92, 3.74,
        )


class TestScoreSsq:
    def test_all_zero(self):
        assert score_ssq(resp([0] * 16)) == SsqScore(0.0, 0.0, 0.0, 0.0)

    def test_all_ones_hand_computed(self):
        # Every cluster holds 7 items, so raw sums are all 7:
        # N = 7*9.54, O = 7*7.58, D = 7*13.92, total = 21*3.74.
        score = score_ssq(resp([1] * 16))
        assert score.nausea == pytest.approx(66.78)
        assert score.oculomotor == pytest.approx(53.06)
        assert score.disorientation == pytest.approx(97.44)
        assert score.total == pytest.approx(78.54)

    def test_mixed_form_hand_computed(self):
        # items 1..16 = (1,2,0,1,3,0,2,1,0,2,1,3,0,1,2,0)
        # nausea cluster {1,6,7,8,9,15,16}: 1+0+2+1+0+2+0 = 6 -> 57.24
        # oculomotor {1,2,3,4,5,9,11}:      1+2+0+1+3+0+1 = 8 -> 60.64
        # disorientation {5,8,10,11,12,13,14}: 3+1+2+1+3+0+1 = 11 -> 153.12
        # total = (6+8+11)*3.74 = 93.50
        score = score_ssq(resp([1, 2, 0, 1, 3, 0, 2, 1, 0, 2, 1, 3, 0, 1, 2, 0]))
        assert score.nausea == pytest.approx(57.24)
        assert score.oculomotor == pytest.approx(60.64)
        assert score.disorientation == pytest.approx(153.12)
        assert score.total == pytest.approx(93.50)

    def test_single_shared_item_hand_computed(self):
        # Item 8 (Nausea) sits in both the nausea and disorientation clusters.
        items = [0] * 16
        items[7] = 2
        score = score_ssq(resp(items))
        assert score.nausea == pytest.approx(2 * 9.54)
        assert score.oculomotor == 0.0
        assert score.disorientation == pytest.approx(2 * 13.92)
        assert score.total == pytest.approx(4 * 3.74)

    def test_monotone_in_every_item(self):
        base = [1] * 16
        base_total = score_ssq(resp(base)).total
        for i in range(N_ITEMS):
            bumped = list(base)
            bumped[i] += 1
            assert score_ssq(resp(bumped)).total > base_total

    def test_out_of_range_item_rejected(self):
        with pytest.raises(ValueError, match="0..3"):
            resp([4] + [0] * 15)
        with pytest.raises(ValueError, match="0..3"):
            resp([-1] + [0] * 15)

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError, match="16"):
            resp([0] * 15)

    def test_bad_phase_rejected(self):
        with pytest.raises(ValueError, match="phase"):
            resp([0] * 16, phase="during")


class TestSsqDelta:
    def test_identical_scores_zero_delta(self):
        pre = resp([1] * 16, phase="pre")
        post = resp([1] * 16, phase="post")
        out = ssq_delta(pre, post)
        assert out.delta == SsqScore(0.0, 0.0, 0.0, 0.0)

    def test_zero_pre_delta_equals_post(self):
        pre = resp([0] * 16, phase="pre")
        post = resp([2] * 16, phase="post")
        out = ssq_delta(pre, post)
        assert out.delta == out.post

    def test_componentwise_subtraction(self):
        # Item 1 sits in both the nausea and oculomotor clusters, so a +2
        # bump moves both raw sums by 2 and the total raw sum by 4.
        pre = resp([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], phase="pre")
        post = resp([3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], phase="post")
        out = ssq_delta(pre, post)
        assert out.delta.nausea == pytest.approx(2 * 9.54)
        assert out.delta.oculomotor == pytest.approx(2 * 7.58)
        assert out.delta.disorientation == 0.0
        assert out.delta.total == pytest.approx(4 * 3.74)
        assert out.pre.total == pytest.approx(2 * 3.74)  # both absolutes exposed
        assert out.post.total == pytest.approx(6 * 3.74)

    def test_phase_mismatch_rejected(self):
        with pytest.raises(ValueError, match="phase mismatch"):
            ssq_delta(resp([0] * 16, phase="post"), resp([0] * 16, phase="post"))

    def test_session_mismatch_rejected(self):
        with pytest.raises(ValueError, match="session mismatch"):
            ssq_delta(resp([0] * 16, phase="pre", session_id="a"), resp([0] * 16, phase="post", session_id="b"))


class TestCsv:
    def test_roundtrip(self, tmp_path):
        rows = [
            ("P1", resp([1] * 16, phase="pre", session_id="P1-day1")),
            ("P1", resp([0, 3] + [0] * 14, phase="post", session_id="P1-day1")),
        ]
        path = str(tmp_path / "ssq.csv")
        responses_to_csv(rows, path)
        assert responses_from_csv(path) == rows
