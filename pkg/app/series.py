# app/series.py
"""
Truncated power series with exact rational coefficients.

A RationalSeries of order N knows the coefficients of x^0 .. x^{N-1};
everything from x^N on is unknown, not zero. Arithmetic tracks how far the
result is actually determined and never extends it.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Tuple, Union

from app.errors import InvalidParameter, OrderExceeded, ZeroLeadingCoefficient
from app.models import TorusKnot
from app.utils.logger import setup_logger

logger = setup_logger("series")

Number = Union[int, float, complex]


@dataclass(frozen=True)
class RationalSeries:
    coefficients: Tuple[Fraction, ...]

    @classmethod
    def from_iterable(cls, coefficients: Iterable) -> "RationalSeries":
        return cls(tuple(Fraction(c) for c in coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def valuation(self) -> int:
        """Index of the first nonzero coefficient; the order if none is known."""
        for i, c in enumerate(self.coefficients):
            if c != 0:
                return i
        return self.order

    def __getitem__(self, n: int) -> Fraction:
        if n >= self.order:
            raise OrderExceeded(f"coefficient x^{n} is beyond the series order {self.order}")
        return self.coefficients[n]

    def truncate(self, order: int) -> "RationalSeries":
        if order > self.order:
            raise OrderExceeded(f"cannot extend a series of order {self.order} to {order}")
        return RationalSeries(self.coefficients[:order])

    def shift_down(self, v: int) -> "RationalSeries":
        """Divide by x^v; the first v coefficients must be zero."""
        if any(c != 0 for c in self.coefficients[:v]):
            raise InvalidParameter(f"series is not divisible by x^{v}")
        return RationalSeries(self.coefficients[v:])

    def __mul__(self, other: "RationalSeries") -> "RationalSeries":
        return ser_mul(self, other)

    def __truediv__(self, other: "RationalSeries") -> "RationalSeries":
        return ser_div(self, other)

    def scale(self, factor) -> "RationalSeries":
        f = Fraction(factor)
        return RationalSeries(tuple(f * c for c in self.coefficients))

    def fraction_strings(self) -> list:
        return [f"{c.numerator}/{c.denominator}" for c in self.coefficients]


def sinh_series(a: int, order: int) -> RationalSeries:
    """
    Maclaurin series of sinh(a x): a^{2n+1}/(2n+1)! at odd powers.

    Args:
        a: Positive integer scale
        order: Number of known coefficients (>= 2)

    Returns:
        RationalSeries of the requested order
    """
    if a < 1:
        raise InvalidParameter(f"sinh_series scale must be positive (got {a})")
    if order < 2:
        raise InvalidParameter(f"sinh_series order must be >= 2 (got {order})")
    coefficients = [Fraction(0)] * order
    for n in range(1, order, 2):
        coefficients[n] = Fraction(a ** n, math.factorial(n))
    return RationalSeries(tuple(coefficients))


def ser_mul(a: RationalSeries, b: RationalSeries) -> RationalSeries:
    """Cauchy product, determined up to min(order_a + val_b, order_b + val_a)."""
    va, vb = a.valuation, b.valuation
    order = min(a.order + vb, b.order + va)
    out = [Fraction(0)] * order
    for i in range(va, min(a.order, order)):
        ai = a.coefficients[i]
        if ai == 0:
            continue
        for j in range(vb, min(b.order, order - i)):
            out[i + j] += ai * b.coefficients[j]
    return RationalSeries(tuple(out))


def ser_inv(a: RationalSeries) -> RationalSeries:
    """
    Multiplicative inverse of a series with nonzero constant term.

    Raises:
        ZeroLeadingCoefficient: If the series is zero to its whole order
        InvalidParameter: If the valuation is positive (use ser_div)
    """
    v = a.valuation
    if v == a.order:
        raise ZeroLeadingCoefficient("cannot invert a series that is identically zero to its order")
    if v > 0:
        raise InvalidParameter(
            f"series has valuation {v}; factor x^{v} out explicitly with ser_div"
        )
    inv0 = 1 / a.coefficients[0]
    out = [inv0]
    for n in range(1, a.order):
        acc = sum((a.coefficients[i] * out[n - i] for i in range(1, n + 1)), Fraction(0))
        out.append(-acc * inv0)
    return RationalSeries(tuple(out))


def ser_div(a: RationalSeries, b: RationalSeries) -> RationalSeries:
    """a / b with the valuation of b cancelled against a."""
    v = b.valuation
    if v == b.order:
        raise ZeroLeadingCoefficient("cannot divide by a series that is identically zero to its order")
    if a.valuation < v:
        raise InvalidParameter(
            f"quotient is not a power series: numerator valuation {a.valuation} < {v}"
        )
    return ser_mul(a.shift_down(v), ser_inv(b.shift_down(v)))


@lru_cache(maxsize=128)
def x_tau_series(knot: TorusKnot, order: int) -> RationalSeries:
    """
    Series of x*tau(x) = 2 sinh(mx) sinh(px) / (sinh(mpx)/x).

    Args:
        knot: Torus knot
        order: Even truncation order >= 4

    Returns:
        Even RationalSeries starting at x^2
    """
    if order < 4 or order % 2:
        raise InvalidParameter(f"x_tau_series order must be even and >= 4 (got {order})")
    numerator = sinh_series(knot.m, order + 1) * sinh_series(knot.p, order + 1)
    denominator = sinh_series(knot.mp, order + 2).shift_down(1)
    series = (numerator.scale(2) / denominator).truncate(order)
    logger.debug(f"x_tau_series(m={knot.m}, p={knot.p}) built to order {order}")
    return series


def default_order(n_max: int) -> int:
    return 2 * n_max + 4


def even_derivative(s: RationalSeries, n: int) -> Fraction:
    """(2n)! times the x^{2n} coefficient, i.e. the 2n-th derivative at 0."""
    if n < 0:
        raise InvalidParameter(f"derivative index must be >= 0 (got {n})")
    if 2 * n >= s.order:
        raise OrderExceeded(f"derivative of order {2 * n} needs series order > {2 * n}, have {s.order}")
    return math.factorial(2 * n) * s.coefficients[2 * n]


def evaluate(s: RationalSeries, x: Number) -> Number:
    """Horner evaluation of the truncated series in floating point."""
    acc = 0.0
    for c in reversed(s.coefficients):
        acc = acc * x + float(c)
    return acc


def tail_bound(s: RationalSeries, x: Number) -> float:
    """Remainder estimate 2*|c_last|*|x|^last from the last nonzero known coefficient."""
    for n in range(s.order - 1, -1, -1):
        if s.coefficients[n] != 0:
            return 2.0 * abs(float(s.coefficients[n])) * abs(x) ** n
    return 0.0
