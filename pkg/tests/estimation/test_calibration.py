import pytest

from cuffless.estimation import (
    DEFAULT_ALPHA,
    BasalBP,
    BPReading,
    calibrate,
    check_alpha,
    compute_basal,
    zero_baseline,
)
from cuffless.exceptions import CalibrationError


@pytest.fixture
def base():
    return BasalBP(120.0, 80.0)


class TestComputeBasal:
    def test_mean_of_day_d(self):
        basal = compute_basal([BPReading(120.0, 80.0), BPReading(124.0, 78.0)])
        assert basal == BasalBP(122.0, 79.0, n_day_d=2)

    def test_single_reading(self):
        reading = BPReading(118.0, 76.0)
        assert compute_basal([reading]).as_reading() == reading

    def test_no_readings(self):
        with pytest.raises(CalibrationError, match="at least one day-D"):
            compute_basal([])


class TestCalibrate:
    def test_default_alpha(self, base):
        assert DEFAULT_ALPHA == 0.3
        cal = calibrate(BPReading(130.0, 90.0), base)
        assert cal.sbp_mmhg == pytest.approx(123.0)
        assert cal.dbp_mmhg == pytest.approx(83.0)

    def test_alpha_zero_returns_base_exactly(self, base):
        cal = calibrate(BPReading(173.3, 91.7), base, alpha=0.0)
        assert cal == base.as_reading()
        assert cal == zero_baseline(base)

    def test_alpha_one_returns_free(self, base):
        free = BPReading(131.0, 84.0)
        assert calibrate(free, base, alpha=1.0) == free

    def test_free_equal_to_base_is_a_fixed_point(self, base):
        for alpha in (0.1, 0.3, 0.7):
            assert calibrate(base.as_reading(), base, alpha) == base.as_reading()

    @pytest.mark.parametrize("alpha", [-0.01, 1.01, float("nan")])
    def test_alpha_range(self, base, alpha):
        with pytest.raises(CalibrationError, match=r"alpha must be in \[0, 1\]"):
            calibrate(BPReading(130.0, 90.0), base, alpha)

    def test_check_alpha(self):
        assert check_alpha(1) == 1.0


class TestBasalBP:
    def test_invalid_anchor(self):
        with pytest.raises(CalibrationError, match="violates SBP > DBP > 0"):
            BasalBP(80.0, 90.0)

    def test_count_must_be_positive(self):
        with pytest.raises(CalibrationError, match="n_day_d"):
            BasalBP(120.0, 80.0, n_day_d=0)
