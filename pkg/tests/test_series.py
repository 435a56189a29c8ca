"""
Unit tests for exact rational power series
"""

import math
from fractions import Fraction

import pytest
from app.errors import InvalidParameter, OrderExceeded, ZeroLeadingCoefficient
from app.knot import torsion
from app.models import TorusKnot
from app.series import (
    RationalSeries,
    default_order,
    evaluate,
    even_derivative,
    ser_div,
    ser_inv,
    ser_mul,
    sinh_series,
    tail_bound,
    x_tau_series,
)

TREFOIL = TorusKnot(m=2, p=3)


def series(*coefficients):
    return RationalSeries.from_iterable(coefficients)


class TestArithmetic:
    """Test cases for series arithmetic"""

    def test_sinh_series(self):
        """Test the Maclaurin coefficients of sinh(ax)"""
        assert sinh_series(1, 6) == series(0, 1, 0, Fraction(1, 6), 0, Fraction(1, 120))
        assert sinh_series(2, 4)[3] == Fraction(8, 6)

    def test_sinh_series_order(self):
        """Test the minimum order"""
        with pytest.raises(InvalidParameter):
            sinh_series(1, 1)

    def test_product_tracks_known_order(self):
        """Test that a product of two O(x) series knows one more coefficient"""
        square = ser_mul(sinh_series(1, 4), sinh_series(1, 4))

        assert square.order == 5
        assert square == series(0, 0, 1, 0, Fraction(1, 3))
        assert square.truncate(4) == series(0, 0, 1, 0)

    def test_inverse(self):
        """Test 1/(1 - x) = 1 + x + x^2 + ..."""
        assert ser_inv(series(1, -1, 0, 0, 0)) == series(1, 1, 1, 1, 1)

    def test_inverse_of_zero(self):
        """Test that a vanishing series cannot be inverted"""
        with pytest.raises(ZeroLeadingCoefficient):
            ser_inv(series(0, 0, 0))

    def test_inverse_needs_constant_term(self):
        """Test that positive valuation must go through ser_div"""
        with pytest.raises(InvalidParameter, match="ser_div"):
            ser_inv(series(0, 1, 0))

    def test_division_cancels_valuation(self):
        """Test sinh(x)/x"""
        quotient = ser_div(sinh_series(1, 6), series(0, 1, 0, 0, 0, 0))

        assert quotient == series(1, 0, Fraction(1, 6), 0, Fraction(1, 120))

    def test_division_not_a_power_series(self):
        """Test that x/x^2 is rejected"""
        with pytest.raises(InvalidParameter):
            ser_div(series(0, 1, 0, 0), series(0, 0, 1, 0))

    def test_index_beyond_order(self):
        """Test that unknown coefficients are not read as zero"""
        with pytest.raises(OrderExceeded):
            series(1, 2)[2]


class TestTorsionSeries:
    """Test cases for x_tau_series"""

    def test_trefoil_coefficients(self):
        """Test 2, -23/3, 1681/60 for the trefoil"""
        s = x_tau_series(TREFOIL, 8)

        assert s.order == 8
        assert [s[2], s[4], s[6]] == [Fraction(2), Fraction(-23, 3), Fraction(1681, 60)]
        assert s.fraction_strings()[:5] == ["0/1", "0/1", "2/1", "0/1", "-23/3"]

    def test_unknot_like_coefficients(self):
        """Test 2x sinh(x) for m = p = 1"""
        s = x_tau_series(TorusKnot(m=1, p=1), 6)

        assert [s[2], s[4]] == [Fraction(2), Fraction(1, 3)]

    def test_parity(self):
        """Test that all odd coefficients vanish"""
        s = x_tau_series(TorusKnot(m=3, p=5), 20)
        assert all(s[n] == 0 for n in range(1, 20, 2))

    def test_swap_symmetry(self):
        """Test that T(m,p) and T(p,m) give identical series"""
        knot = TorusKnot(m=3, p=4)
        assert x_tau_series(knot, 16) == x_tau_series(knot.swapped(), 16)

    def test_cached(self):
        """Test that repeated requests return the cached series"""
        assert x_tau_series(TREFOIL, 12) is x_tau_series(TREFOIL, 12)

    def test_order_must_be_even(self):
        """Test order validation"""
        with pytest.raises(InvalidParameter):
            x_tau_series(TREFOIL, 7)
        with pytest.raises(InvalidParameter):
            x_tau_series(TREFOIL, 2)

    def test_matches_torsion(self):
        """Test the truncated series against x*tau(x)"""
        for knot in (TREFOIL, TorusKnot(m=3, p=4)):
            s = x_tau_series(knot, 24)
            for x in (0.01, 0.02 + 0.01j, -0.015):
                assert evaluate(s, x) == pytest.approx(x * torsion(knot, x), rel=1e-12)

    def test_tail_bound_covers_truncation(self):
        """Test that the remainder estimate bounds the truncation error"""
        s = x_tau_series(TREFOIL, 10)
        x = 0.05
        error = abs(evaluate(s, x) - x * torsion(TREFOIL, x))
        assert 0 < error <= tail_bound(s, x)

    def test_coefficient_ratio(self):
        """Test that c_{2n+2}/c_{2n} approaches -(mp/pi)^2"""
        for knot in (TREFOIL, TorusKnot(m=3, p=4)):
            s = x_tau_series(knot, 40)
            ratio = float(s[38] / s[36])
            assert ratio < 0
            assert abs(ratio) == pytest.approx((knot.mp / math.pi) ** 2, rel=0.1)


class TestDerivatives:
    """Test cases for even_derivative"""

    def test_trefoil_derivatives(self):
        """Test 4 and -184 for the trefoil"""
        s = x_tau_series(TREFOIL, default_order(2))

        assert even_derivative(s, 1) == 4
        assert even_derivative(s, 2) == -184

    def test_beyond_order(self):
        """Test that derivatives past the series order are refused"""
        with pytest.raises(OrderExceeded):
            even_derivative(x_tau_series(TREFOIL, 8), 4)
