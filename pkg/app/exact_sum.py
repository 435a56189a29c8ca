# app/exact_sum.py
"""
Gaussian sum for the colored Jones invariant of T(m,p), the normalised
ratio J_L/J_O, and the Kashaev invariant at h = 2*pi*i/k.

The summation index r runs over half-integers when k is even, so it is
replaced by s = 2r and every exponent is kept as the integer
E = mp s^2 + 2s(m + eps p) + 2 eps, multiplying h/4.
"""

import cmath
import math
import sys
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from app.errors import DivisionNearZero, InvalidParameter, NoConvergence, NonPositive, NumericalOverflow
from app.models import ComplexValue, LimitEstimate, TorusKnot
from app.phase import phases
from app.utils.config import DOUBLE_PRECISION_BITS, default_jobs, default_precision
from app.utils.logger import setup_logger
from app.utils.summation import pairwise_sum

logger = setup_logger("exact_sum")

EXP_LIMIT = 709.0
DIVISION_TOLERANCE = 1e-12
EPS = sys.float_info.epsilon


def _check_color(k: int) -> None:
    if k < 1:
        raise NonPositive(f"color k must be >= 1 (got {k})")


def exponents(knot: TorusKnot, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Integer exponents E and signs eps in canonical order.

    Order: eps = +1 block then eps = -1 block, s ascending within each.

    Returns:
        (E, eps) as int64 arrays of length 2k
    """
    _check_color(k)
    m, p, mp = knot.m, knot.p, knot.mp
    s = np.arange(-(k - 1), k, 2, dtype=np.int64)
    blocks_e, blocks_sign = [], []
    for eps in (1, -1):
        blocks_e.append(mp * s * s + 2 * s * (m + eps * p) + 2 * eps)
        blocks_sign.append(np.full(s.size, eps, dtype=np.int64))
    return np.concatenate(blocks_e), np.concatenate(blocks_sign)


def gauss_sum(knot: TorusKnot, k: int, h: complex, jobs: Optional[int] = None) -> complex:
    """
    sum_{eps=+-1} sum_s eps * exp((h/4) E).

    Args:
        knot: Torus knot
        k: Color (>= 1)
        h: Complex deformation parameter
        jobs: Worker threads for the reduction (result does not depend on it)

    Returns:
        The Gaussian sum

    Raises:
        NumericalOverflow: If some term leaves the double exponent range
    """
    h = complex(h)
    E, sign = exponents(knot, k)
    quarter = h / 4
    if abs(quarter.real) * float(np.max(np.abs(E))) > EXP_LIMIT:
        raise NumericalOverflow(
            f"|Re h| * max|E| / 4 exceeds {EXP_LIMIT} for k={k}, h={h}"
        )
    terms = sign * np.exp(quarter * E.astype(np.float64))
    return pairwise_sum(terms, jobs or default_jobs())


def gauss_sum_completed_square(knot: TorusKnot, k: int, h: complex) -> complex:
    """
    The same Gaussian sum written as complete squares in r:
    e^{-(h/4)(m/p+p/m)} sum_eps eps sum_{r=0}^{k-1} exp(h mp (r - (k-1)/2 + (m+eps p)/(2mp))^2).
    """
    _check_color(k)
    h = complex(h)
    m, p, mp = knot.m, knot.p, knot.mp
    terms = []
    for eps in (1, -1):
        for r in range(k):
            numerator = 2 * mp * r - mp * (k - 1) + m + eps * p
            terms.append(eps * cmath.exp(h * (numerator * numerator) / (4 * mp)))
    return cmath.exp(-h * (m * m + p * p) / (4 * mp)) * pairwise_sum(terms)


def unknot_jones(k: int, h: complex) -> complex:
    """J_O(h) = sinh(kh/2)/sinh(h/2) with the value k at h = 0."""
    _check_color(k)
    h = complex(h)
    if h == 0:
        return complex(k)
    return cmath.sinh(k * h / 2) / cmath.sinh(h / 2)


def jones_ratio(knot: TorusKnot, k: int, h: complex, jobs: Optional[int] = None) -> complex:
    """
    J_{L,k}(h)/J_{O,k}(h) = gauss_sum / (2 sinh(kh/2)).

    Raises:
        DivisionNearZero: If |sinh(kh/2)| is below tolerance; at h = 2*pi*i/k
            use kashaev_exact instead
    """
    h = complex(h)
    denominator = cmath.sinh(k * h / 2)
    if abs(denominator) < DIVISION_TOLERANCE:
        raise DivisionNearZero(
            f"sinh(kh/2) vanishes at k={k}, h={h}; use kashaev_exact at the root of unity"
        )
    return gauss_sum(knot, k, h, jobs) / (2 * denominator)


def kashaev_exact(
    knot: TorusKnot,
    k: int,
    precision: Optional[int] = None,
    jobs: Optional[int] = None
) -> complex:
    """
    Kashaev invariant <L>_k, the limit of jones_ratio at h = 2*pi*i/k.

    Both the Gaussian sum and 2 sinh(kh/2) vanish there, so the limit is the
    ratio of derivatives: -(1/k) sum eps (E/4) exp(i pi E'/(2k)), E' = E mod 4k.

    Args:
        knot: Torus knot
        k: Color (>= 1)
        precision: Working precision in bits; above 53 the sum runs in mpmath
        jobs: Worker threads for the double-precision reduction

    Returns:
        <L>_k as a Python complex
    """
    bits = precision or default_precision()
    E, sign = exponents(knot, k)
    if bits <= DOUBLE_PRECISION_BITS:
        weights = sign * (E.astype(np.float64) / 4.0)
        total = pairwise_sum(weights * phases(E, k), jobs or default_jobs())
        return -total / k

    with mpmath.workprec(bits):
        modulus = 4 * k
        terms = [
            mpmath.mpf(int(e)) / 4 * int(s) * mpmath.expjpi(mpmath.mpf(int(e) % modulus) / (2 * k))
            for e, s in zip(E, sign)
        ]
        total = mpmath.fsum(terms)
        return complex(-total / k)


def richardson_extrapolate(steps: Sequence[float], values: Sequence[complex]) -> Tuple[complex, float]:
    """
    Polynomial extrapolation of values(step) to step = 0 (Neville table).

    On a geometric ladder this is Richardson extrapolation with all
    integer powers of the step eliminated in turn.

    Args:
        steps: Step sizes, positive and strictly decreasing
        values: Function values at those steps

    Returns:
        (limit, error) where error is the change between the last two
        diagonal entries; |value| when only one step is given
    """
    n = len(steps)
    if n != len(values) or n == 0:
        raise InvalidParameter("steps and values must be non-empty and of equal length")
    if n == 1:
        return complex(values[0]), abs(values[0])

    diagonal = [complex(values[0])]
    last_level = [complex(v) for v in values]
    for level in range(1, n):
        this_level = []
        for i in range(n - level):
            far, near = steps[i], steps[i + level]
            this_level.append((far * last_level[i + 1] - near * last_level[i]) / (far - near))
        diagonal.append(this_level[0])
        last_level = this_level
    return diagonal[-1], abs(diagonal[-1] - diagonal[-2])


def default_steps(knot: TorusKnot, k: int, levels: int = 6, ratio: float = 4.0) -> List[float]:
    """Geometric ladder starting where delta * max|E|/4 is about 1/4."""
    first = 1.0 / (knot.mp * k * k)
    return [first / ratio ** i for i in range(levels)]


def kashaev_limit_oracle(
    knot: TorusKnot,
    k: int,
    steps: Optional[Sequence[float]] = None
) -> LimitEstimate:
    """
    Independent estimate of <L>_k by approaching h = 2*pi*i/k from two directions.

    jones_ratio is sampled at h0 + delta and h0 + i*delta and each sequence
    is extrapolated to delta = 0.

    Raises:
        InvalidParameter: If steps are not positive and strictly decreasing
        NoConvergence: If the two directional limits disagree by more than
            ten times their combined error estimate
    """
    _check_color(k)
    steps = list(steps) if steps is not None else default_steps(knot, k)
    if not steps or any(d <= 0 for d in steps) or any(b >= a for a, b in zip(steps, steps[1:])):
        raise InvalidParameter("oracle steps must be positive and strictly decreasing")

    h0 = 2j * math.pi / k
    limits, errors = [], []
    for direction in (1.0, 1j):
        values = [jones_ratio(knot, k, h0 + direction * d) for d in steps]
        limit, error = richardson_extrapolate(steps, values)
        if len(steps) > 1:
            noise = 32 * EPS * k / abs(2 * math.sinh(k * steps[-1] / 2))
            error = max(error, noise)
        limits.append(limit)
        errors.append(error)

    real_limit, imag_limit = limits
    spread = abs(real_limit - imag_limit)
    if len(steps) > 1 and spread > 10 * (errors[0] + errors[1]):
        raise NoConvergence(
            f"directional limits disagree for T({knot.m},{knot.p}), k={k}: "
            f"spread {spread:.3e} vs error {errors[0] + errors[1]:.3e}",
            estimate=(real_limit + imag_limit) / 2,
        )

    value = (real_limit + imag_limit) / 2
    error = abs(value) if len(steps) == 1 else max(errors[0], errors[1], spread / 2)
    logger.debug(f"oracle T({knot.m},{knot.p}) k={k}: {value} +- {error:.2e}")
    return LimitEstimate(
        value=ComplexValue.from_complex(value),
        error=error,
        real_direction=ComplexValue.from_complex(real_limit),
        imaginary_direction=ComplexValue.from_complex(imag_limit),
    )
