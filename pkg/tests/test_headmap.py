import pytest

from quadlag.headmap import (
    HeadSample,
    MappingConfig,
    ZeroReference,
    calibrate_zero,
    map_continuous,
    map_head,
    map_threshold,
    mapping_from_mapping,
)
from quadlag.sim import ControlInput, SimConfig, parse_keyvalues

CFG = SimConfig()
ZERO = ZeroReference()


class TestCalibrateZero:
    def test_constant_samples(self):
        samples = [HeadSample(2.0, -1.0, 0.0, i / 75.0) for i in range(10)]
        zero = calibrate_zero(samples)
        assert zero == ZeroReference(2.0, -1.0)

    def test_single_neutral_sample(self):
        assert calibrate_zero([HeadSample()]) == ZeroReference(0.0, 0.0)

    def test_arithmetic_mean(self):
        zero = calibrate_zero([HeadSample(1.0, 0.0), HeadSample(3.0, 0.0)])
        assert zero == ZeroReference(2.0, 0.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            calibrate_zero([])

    def test_idempotent_on_zeroed_samples(self):
        zero = calibrate_zero([HeadSample(4.0, -2.0)] * 5)
        rezeroed = [HeadSample(4.0 - zero.pitch_offset_deg, -2.0 - zero.roll_offset_deg)] * 5
        assert calibrate_zero(rezeroed) == ZeroReference(0.0, 0.0)


class TestMapContinuous:
    def test_identity_mapping(self):
        out = map_continuous(HeadSample(4.0, -2.0), ZERO, CFG)
        assert out == ControlInput(4.0, -2.0)

    def test_clamped(self):
        out = map_continuous(HeadSample(15.0, 0.0), ZERO, CFG)
        assert out == ControlInput(10.0, 0.0)

    def test_offset_cancellation(self):
        out = map_continuous(HeadSample(4.0, 0.0), ZeroReference(4.0, 0.0), CFG)
        assert out == ControlInput(0.0, 0.0)

    def test_linear_slope_one(self):
        for angle in (-9.5, -3.0, 0.0, 2.25, 9.9):
            out = map_continuous(HeadSample(angle, angle / 2), ZERO, CFG)
            assert out.pitch_setpoint_deg == angle
            assert out.roll_setpoint_deg == angle / 2

    def test_swap_axes(self):
        out = map_continuous(HeadSample(pitch_deg=3.0, roll_deg=-7.0), ZERO, CFG, swap_axes=True)
        assert out == ControlInput(pitch_setpoint_deg=-7.0, roll_setpoint_deg=3.0)

    def test_yaw_ignored(self):
        out = map_continuous(HeadSample(1.0, 2.0, yaw_deg=45.0), ZERO, CFG)
        assert out == ControlInput(1.0, 2.0)


class TestMapThreshold:
    def test_below_threshold_is_off(self):
        out = map_threshold(HeadSample(1.0, 0.0), ZERO, 5.0, 10.0, CFG)
        assert out.pitch_setpoint_deg == 0.0

    def test_above_threshold_fixed_tilt(self):
        out = map_threshold(HeadSample(7.0, 0.0), ZERO, 5.0, 10.0, CFG)
        assert out.pitch_setpoint_deg == 10.0

    def test_symmetric_negative(self):
        out = map_threshold(HeadSample(-7.0, 0.0), ZERO, 5.0, 10.0, CFG)
        assert out.pitch_setpoint_deg == -10.0

    def test_output_alphabet(self):
        for pitch in (-20.0, -5.1, -5.0, 0.0, 4.99, 5.01, 20.0):
            for roll in (-6.0, 0.0, 6.0):
                out = map_threshold(HeadSample(pitch, roll), ZERO, 5.0, 8.0, CFG)
                assert out.pitch_setpoint_deg in (-8.0, 0.0, 8.0)
                assert out.roll_setpoint_deg in (-8.0, 0.0, 8.0)

    def test_offsets_applied_before_gate(self):
        out = map_threshold(HeadSample(7.0, 0.0), ZeroReference(7.0, 0.0), 5.0, 10.0, CFG)
        assert out.pitch_setpoint_deg == 0.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError, match="threshold"):
            map_threshold(HeadSample(), ZERO, 0.0, 10.0, CFG)
        with pytest.raises(ValueError, match="fixed_tilt"):
            map_threshold(HeadSample(), ZERO, 5.0, 11.0, CFG)
        with pytest.raises(ValueError, match="fixed_tilt"):
            map_threshold(HeadSample(), ZERO, 5.0, 0.0, CFG)


class TestMappingConfig:
    def test_defaults_continuous(self):
        mapping = MappingConfig()
        out = map_head(HeadSample(4.0, -2.0), ZERO, CFG, mapping)
        assert out == ControlInput(4.0, -2.0)

    def test_threshold_mode_dispatch(self):
        mapping = MappingConfig(mode="threshold", threshold_deg=5.0, fixed_tilt_deg=10.0)
        out = map_head(HeadSample(7.0, -1.0), ZERO, CFG, mapping)
        assert out == ControlInput(10.0, 0.0)

    def test_swap_flag_respected(self):
        mapping = MappingConfig(swap_axes=True)
        out = map_head(HeadSample(pitch_deg=3.0, roll_deg=-7.0), ZERO, CFG, mapping)
        assert out == ControlInput(pitch_setpoint_deg=-7.0, roll_setpoint_deg=3.0)

    def test_session_config_file_keys(self):
        text = "mode = threshold\nswap_axes = true\nthreshold_deg = 4\nfixed_tilt_deg = 8\n"
        mapping = mapping_from_mapping(parse_keyvalues(text))
        assert mapping == MappingConfig(mode="threshold", swap_axes=True, threshold_deg=4.0, fixed_tilt_deg=8.0)

    def test_validation(self):
        with pytest.raises(ValueError, match="mode"):
            MappingConfig(mode="toggle")
        with pytest.raises(ValueError, match="positive"):
            MappingConfig(threshold_deg=0.0)
        with pytest.raises(ValueError, match="swap_axes"):
            mapping_from_mapping({"swap_axes": "yes"})
        with pytest.raises(ValueError, match="unknown"):
            mapping_from_mapping({"gain": "2"})
