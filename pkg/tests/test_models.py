"""
Unit tests for Pydantic models
"""

import math

import pytest
from pydantic import ValidationError
from app.models import (
    ComplexValue,
    ContourSpec,
    RunConfig,
    TorusKnot,
    VolumeRow,
    VolumeScan,
)


class TestTorusKnot:
    """Test cases for TorusKnot model"""

    def test_valid_knot(self):
        """Test a coprime pair"""
        knot = TorusKnot(m=2, p=3)

        assert knot.mp == 6
        assert not knot.is_unknot
        assert knot.swapped() == TorusKnot(m=3, p=2)

    def test_unknot_flag(self):
        """Test that m = 1 or p = 1 is recognised as the unknot"""
        assert TorusKnot(m=1, p=5).is_unknot
        assert TorusKnot(m=4, p=1).is_unknot

    def test_not_coprime(self):
        """Test that a common factor is rejected"""
        with pytest.raises(ValidationError, match="coprime"):
            TorusKnot(m=2, p=4)

    def test_nonpositive(self):
        """Test that zero winding numbers are rejected"""
        with pytest.raises(ValidationError):
            TorusKnot(m=0, p=3)

    def test_frozen(self):
        """Test that knots are immutable and hashable"""
        knot = TorusKnot(m=2, p=3)
        with pytest.raises(ValidationError):
            knot.m = 5
        assert len({knot, TorusKnot(m=2, p=3)}) == 1


class TestComplexValue:
    """Test cases for ComplexValue model"""

    def test_round_trip(self):
        """Test conversion from and to complex"""
        value = ComplexValue.from_complex(3 - 4j)

        assert value.re == 3.0
        assert value.im == -4.0
        assert value.abs == 5.0
        assert value.to_complex() == 3 - 4j

    def test_non_finite_rejected(self):
        """Test that NaN and infinity are rejected"""
        with pytest.raises(ValidationError):
            ComplexValue(re=math.nan, im=0.0)
        with pytest.raises(ValidationError):
            ComplexValue(re=0.0, im=math.inf)


class TestContourSpec:
    """Test cases for ContourSpec model"""

    def test_defaults(self):
        """Test default contour"""
        contour = ContourSpec()

        assert contour.phi == 0.0
        assert contour.truncation is None
        assert contour.panels == 16
        assert contour.tol == 1e-12

    def test_budget_below_initial_panels(self):
        """Test that max_panels must cover panels"""
        with pytest.raises(ValidationError):
            ContourSpec(panels=32, max_panels=8)

    def test_invalid_truncation(self):
        """Test that a nonpositive truncation is rejected"""
        with pytest.raises(ValidationError):
            ContourSpec(truncation=0.0)


class TestVolumeScan:
    """Test cases for VolumeScan model"""

    def test_rows_must_ascend(self):
        """Test that rows out of order are rejected"""
        knot = TorusKnot(m=2, p=3)
        rows = [
            VolumeRow(k=5, abs=2.0, log_abs_over_k=math.log(2.0) / 5),
            VolumeRow(k=3, abs=2.0, log_abs_over_k=math.log(2.0) / 3),
        ]
        with pytest.raises(ValidationError, match="ascending"):
            VolumeScan(knot=knot, rows=rows, fitted_limit=0.1)

    def test_zero_magnitude_rejected(self):
        """Test that a vanishing invariant cannot be recorded"""
        with pytest.raises(ValidationError):
            VolumeRow(k=3, abs=0.0, log_abs_over_k=0.0)


class TestRunConfig:
    """Test cases for RunConfig model"""

    def test_single_color(self):
        """Test that -k gives a single color"""
        config = RunConfig(subcommand="kashaev", m=2, p=3, k=7)

        assert config.k_values() == [7]

    def test_color_range(self):
        """Test range expansion with kmin/kmax/kstep"""
        config = RunConfig(subcommand="kashaev", m=2, p=3, kmin=3, kmax=11, kstep=4)

        assert config.k_values() == [3, 7, 11]

    def test_volume_scan_defaults_to_two(self):
        """Test that volume scans start at k = 2 by default"""
        config = RunConfig(subcommand="volume-scan", m=2, p=3, kmax=4)

        assert config.k_values() == [2, 3, 4]

    def test_missing_h(self):
        """Test that jones requires --h"""
        with pytest.raises(ValidationError, match="--h"):
            RunConfig(subcommand="jones", m=2, p=3, k=3)

    def test_expand_needs_two_colors(self):
        """Test the k >= 2 precondition of expand"""
        with pytest.raises(ValidationError, match="-k must be >= 2"):
            RunConfig(subcommand="expand", m=2, p=3, k=1)

    def test_n_max_range(self):
        """Test the 1..10 range of --n-max"""
        with pytest.raises(ValidationError, match="--n-max"):
            RunConfig(subcommand="expand", m=2, p=3, k=5, n_max=11)

    def test_odd_order(self):
        """Test that odd series orders are rejected"""
        with pytest.raises(ValidationError, match="--order"):
            RunConfig(subcommand="series", m=2, p=3, order=7)

    def test_precision_floor(self):
        """Test that precision below double is rejected"""
        with pytest.raises(ValidationError):
            RunConfig(subcommand="kashaev", m=2, p=3, k=3, precision=24)

    def test_complex_parameter(self):
        """Test that complex parameters are accepted"""
        config = RunConfig(subcommand="jones", m=2, p=3, k=3, h=0.1 + 0.2j)

        assert config.h == 0.1 + 0.2j
