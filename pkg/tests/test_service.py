import os

import pytest

from quadlag.flightlog import load_flight_log
from quadlag.service import ServeConfig
from quadlag.sim import SimConfig
from quadlag.wire import (
    MessageCounter,
    SequenceTracker,
    WireMessage,
    decode_message,
    encode_message,
)

from net import ServiceRunner, WireClient


class TestWireCodec:
    def test_roundtrip(self):
        msg = WireMessage("input", 7, 1.5, {"pitch_deg": 3.0})
        assert decode_message(encode_message(msg)) == msg

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            decode_message('{"kind": "teleport", "seq": 0}')

    def test_rejects_bad_seq(self):
        with pytest.raises(ValueError, match="seq"):
            decode_message('{"kind": "input", "seq": -1}')
        with pytest.raises(ValueError, match="seq"):
            decode_message('{"kind": "input", "seq": "x"}')

    def test_rejects_malformed_json(self):
        with pytest.raises(ValueError, match="malformed"):
            decode_message("{nope")

    def test_sequence_tracker_strictly_increasing(self):
        tracker = SequenceTracker()
        assert tracker.accept(0)
        assert tracker.accept(5)
        assert not tracker.accept(5)
        assert not tracker.accept(3)
        assert tracker.accept(6)

    def test_message_counter(self):
        counter = MessageCounter()
        assert [counter.next() for _ in range(3)] == [0, 1, 2]


def serve_config(tmp_path) -> ServeConfig:
    return ServeConfig(
        port=0,
        data_dir=str(tmp_path / "data"),
        realtime=False,
        sim=SimConfig(),
        max_duration_s=120.0,
    )


def fly_to_destination(pilot: WireClient, pitch: float = 8.0) -> WireMessage:
    """Send one held forward command and wait for the stop message."""
    pilot.send("input", {"pitch_deg": pitch, "roll_deg": 0.0, "yaw_deg": 0.0, "timestamp_s": 0.0})
    return pilot.recv_until("stop")


class TestServiceEndToEnd:
    def test_full_session_persists_record(self, tmp_path):
        cfg = serve_config(tmp_path)
        with ServiceRunner(cfg) as runner:
            with WireClient(runner.url, "pilot") as pilot:
                assert pilot.hello.payload["role"] == "pilot"
                pilot.send("configure", {"participant": "P1", "day": 1, "training": True})
                configured = pilot.recv_until("event", "configured")
                assert configured.payload["training"] is True
                assert configured.payload["course"].startswith("# quadlag course v1")

                pilot.send("ssq_submit", {"phase": "pre", "items": [0] * 16})
                pre_ack = pilot.recv_until("event", "ssq_recorded")
                assert pre_ack.payload["total"] == 0.0

                pilot.send("calibrate_begin", {})
                for i in range(5):
                    pilot.send("input", {"pitch_deg": 1.0, "roll_deg": -0.5, "yaw_deg": 0.0, "timestamp_s": i / 75})
                calibrated = None
                pilot.send("calibrate_done", {})
                calibrated = pilot.recv_until("event", "calibrated")
                assert calibrated.payload["pitch_offset_deg"] == pytest.approx(1.0)
                assert calibrated.payload["roll_offset_deg"] == pytest.approx(-0.5)

                pilot.send("start", {})
                pilot.recv_until("event", "started")
                # Held forward input flies the training course to the volume.
                pilot.send("input", {"pitch_deg": 9.0, "roll_deg": -0.5, "yaw_deg": 0.0, "timestamp_s": 0.1})
                stop = pilot.recv_until("stop")
                assert stop.payload["reason"] == "destination"
                done = pilot.recv_until("event", "flight_completed")
                assert done.payload["N_w"] == 1

                pilot.send("ssq_submit", {"phase": "post", "items": [1] * 16})
                post_ack = pilot.recv_until("event", "ssq_recorded")
                assert post_ack.payload["total"] == pytest.approx(78.54)

        session_dir = os.path.join(cfg.data_dir, "P1", "day1-training")
        log = load_flight_log(os.path.join(session_dir, "flight.log"))
        assert log.completed
        with open(os.path.join(session_dir, "session.txt")) as fh:
            session_text = fh.read()
        assert "status = completed" in session_text
        assert "ssq_post_items = 1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1" in session_text
        assert os.path.isfile(os.path.join(session_dir, "inputs.log"))

    def test_state_stream_carries_setpoints_and_hud(self, tmp_path):
        with ServiceRunner(serve_config(tmp_path)) as runner:
            with WireClient(runner.url, "pilot") as pilot:
                pilot.send("configure", {"participant": "P2", "day": 1, "training": True})
                pilot.recv_until("event", "configured")
                pilot.send("start", {})
                pilot.send("input", {"pitch_deg": 8.0, "roll_deg": 0.0, "yaw_deg": 0.0, "timestamp_s": 0.0})
                state = pilot.recv_until("state")
                payload = state.payload
                for key in ("t_s", "x_m", "y_m", "z_m", "pitch_deg", "roll_deg",
                            "setpoint_pitch_deg", "setpoint_roll_deg", "hud"):
                    assert key in payload
                assert payload["hud"]["line_tilt"] == payload["roll_deg"]
                pilot.recv_until("stop")

    def test_stale_seq_inputs_discarded(self, tmp_path):
        with ServiceRunner(serve_config(tmp_path)) as runner:
            with WireClient(runner.url, "pilot") as pilot:
                pilot.send("configure", {"participant": "P3", "day": 1, "training": True})
                pilot.recv_until("event", "configured")
                pilot.send("calibrate_begin", {})
                # Fresh seq accepted, then a stale duplicate must be ignored.
                pilot.send("input", {"pitch_deg": 2.0, "roll_deg": 0.0, "yaw_deg": 0.0, "timestamp_s": 0.0}, seq=50)
                pilot.send("input", {"pitch_deg": 99.0, "roll_deg": 9.0, "yaw_deg": 0.0, "timestamp_s": 0.1}, seq=10)
                pilot.send("calibrate_done", {}, seq=51)
                calibrated = pilot.recv_until("event", "calibrated")
                assert calibrated.payload["n_samples"] == 1
                assert calibrated.payload["pitch_offset_deg"] == pytest.approx(2.0)

    def test_observer_receives_states_but_cannot_alter_flight(self, tmp_path):
        with ServiceRunner(serve_config(tmp_path)) as runner:
            with WireClient(runner.url, "pilot") as pilot, WireClient(runner.url, "observer") as obs:
                assert obs.hello.payload["role"] == "observer"
                pilot.send("configure", {"participant": "P4", "day": 1, "training": True})
                pilot.recv_until("event", "configured")
                obs.recv_until("event", "configured")
                pilot.send("start", {})
                # Hover command from the pilot; sabotage attempt from observer.
                pilot.send("input", {"pitch_deg": 0.0, "roll_deg": 0.0, "yaw_deg": 0.0, "timestamp_s": 0.0})
                obs.send("input", {"pitch_deg": 10.0, "roll_deg": 10.0, "yaw_deg": 0.0, "timestamp_s": 0.0})
                state = obs.recv_until("state")
                # Observer states flow, but the vehicle stays parked: the
                # observer's input never reached the loop.
                for _ in range(20):
                    state = obs.recv_until("state")
                assert state.payload["x_m"] == 0.0
                assert state.payload["z_m"] == 0.0
                pilot.send("stop", {})
                stop = pilot.recv_until("stop")
                assert stop.payload["reason"] == "aborted"

    def test_second_pilot_demoted_to_observer(self, tmp_path):
        with ServiceRunner(serve_config(tmp_path)) as runner:
            with WireClient(runner.url, "pilot") as first, WireClient(runner.url, "pilot") as second:
                assert first.hello.payload["role"] == "pilot"
                assert second.hello.payload["role"] == "observer"

    def test_pilot_disconnect_mid_flight_aborts_with_partial_log(self, tmp_path):
        cfg = serve_config(tmp_path)
        with ServiceRunner(cfg) as runner:
            with WireClient(runner.url, "observer") as obs:
                pilot = WireClient(runner.url, "pilot")
                pilot.send("configure", {"participant": "P5", "day": 2, "latency_level": 1, "course_seed": 3})
                pilot.recv_until("event", "configured")
                pilot.send("calibrate_begin", {})
                pilot.send("input", {"pitch_deg": 0.0, "roll_deg": 0.0, "yaw_deg": 0.0, "timestamp_s": 0.0})
                pilot.send("calibrate_done", {})
                pilot.recv_until("event", "calibrated")
                pilot.send("start", {})
                pilot.send("input", {"pitch_deg": 5.0, "roll_deg": 0.0, "yaw_deg": 0.0, "timestamp_s": 0.0})
                obs.recv_until("state")
                pilot.close()  # vanish mid-flight
                aborted = obs.recv_until("event", "flight_aborted")
                assert aborted.payload["status"] == "aborted"

        session_dir = os.path.join(cfg.data_dir, "P5", "day2")
        log = load_flight_log(os.path.join(session_dir, "flight.log"))
        assert not log.completed
        assert len(log.samples) >= 2

    def test_server_seq_strictly_increases_per_connection(self, tmp_path):
        with ServiceRunner(serve_config(tmp_path)) as runner:
            with WireClient(runner.url, "pilot") as pilot:
                pilot.send("configure", {"participant": "P6", "day": 1, "training": True})
                pilot.recv_until("event", "configured")
                pilot.send("start", {})
                pilot.send("input", {"pitch_deg": 8.0, "roll_deg": 0.0, "yaw_deg": 0.0, "timestamp_s": 0.0})
                seqs = [pilot.hello.seq]
                for _ in range(200):
                    msg = pilot.recv()
                    seqs.append(msg.seq)
                    if msg.kind == "stop":
                        break
                assert all(b > a for a, b in zip(seqs[:-1], seqs[1:]))
