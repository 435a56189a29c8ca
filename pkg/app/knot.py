# app/knot.py
"""
Torus knot identity, Alexander polynomial, the torsion function
tau(z) = 2 sinh(mz) sinh(pz) / sinh(mpz) and the poles of tau(pi z).
"""

import cmath
import math
from functools import lru_cache
from typing import List, Tuple, Union

import mpmath
import numpy as np
from numpy.polynomial import polynomial as npoly

from app.errors import DomainError, NonPositive, NotCoprime, NumericalOverflow, PoleError
from app.models import ComplexValue, PoleDatum, TorusKnot
from app.series import x_tau_series
from app.utils.logger import setup_logger

logger = setup_logger("knot")

ArrayLike = Union[complex, float, np.ndarray]

# |m p z| below this uses the Taylor series (nearest singularity at |mpz| = pi)
SERIES_RADIUS = 0.25
SERIES_ORDER = 24
# |Re(m p z)| above this switches to the overflow-free exponential form
DIRECT_LIMIT = 300.0
POLE_TOLERANCE = 1e-10
# closed-form Alexander denominators below this fall back to the Laurent form
ALEXANDER_DENOMINATOR_FLOOR = 1e-6


def validate_knot(m: int, p: int) -> TorusKnot:
    """
    Build a TorusKnot after checking positivity and coprimality.

    Args:
        m: First winding number
        p: Second winding number

    Returns:
        TorusKnot(m, p); ``is_unknot`` is set when m or p equals 1

    Raises:
        NonPositive: If m < 1 or p < 1
        NotCoprime: If gcd(m, p) != 1
    """
    for name, value in (("m", m), ("p", p)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise NonPositive(f"{name} must be a positive integer (got {value!r})")
    if m < 1 or p < 1:
        raise NonPositive(f"m,p must be positive (got m={m}, p={p})")
    if math.gcd(int(m), int(p)) != 1:
        raise NotCoprime(f"m,p must be coprime (got m={m}, p={p})")
    knot = TorusKnot(m=int(m), p=int(p))
    if knot.is_unknot:
        logger.info(f"T({m},{p}) is the unknot")
    return knot


@lru_cache(maxsize=64)
def _laurent_coefficients(knot: TorusKnot) -> Tuple[Tuple[int, ...], int]:
    """
    Integer coefficients of P(t) = (t^mp - 1)(t - 1) / ((t^m - 1)(t^p - 1))
    and the shift d with Delta(t) = t^{-d} P(t).
    """
    m, p, mp = knot.m, knot.p, knot.mp
    numerator = [0] * (mp + 2)
    for power, coef in ((mp + 1, 1), (mp, -1), (1, -1), (0, 1)):
        numerator[power] += coef
    denominator = [0] * (m + p + 1)
    for power, coef in ((m + p, 1), (m, -1), (p, -1), (0, 1)):
        denominator[power] += coef

    d = len(denominator) - 1
    quotient = [0] * (len(numerator) - d)
    remainder = numerator[:]
    for i in range(len(quotient) - 1, -1, -1):
        coef = remainder[i + d]  # denominator is monic
        quotient[i] = coef
        for j, dj in enumerate(denominator):
            remainder[i + j] -= coef * dj
    assert not any(remainder), "torus knot Alexander quotient must be exact"
    return tuple(quotient), (len(quotient) - 1) // 2


def alexander(knot: TorusKnot, t: complex) -> complex:
    """
    Alexander polynomial of T(m,p) evaluated at t.

    The closed form uses the principal branch of t^{1/2}; the quotient does
    not depend on the branch. Where its denominator vanishes (t an m-th or
    p-th root of unity) the value is the removable limit, read off the
    Laurent polynomial.

    Raises:
        DomainError: If t is 0 or not finite
    """
    t = complex(t)
    if t == 0 or not cmath.isfinite(t):
        raise DomainError(f"Alexander polynomial needs finite nonzero t (got {t})")
    log_t = cmath.log(t)

    def sinh_factor(a: int) -> complex:
        half = cmath.exp(0.5 * a * log_t)
        return half - 1 / half

    try:
        denominator = sinh_factor(knot.m) * sinh_factor(knot.p)
        if abs(denominator) >= ALEXANDER_DENOMINATOR_FLOOR:
            value = sinh_factor(knot.mp) * sinh_factor(1) / denominator
            if cmath.isfinite(value):
                return value
    except OverflowError:
        pass

    coefficients, shift = _laurent_coefficients(knot)
    value = complex(npoly.polyval(t, coefficients)) * t ** (-shift)
    if not cmath.isfinite(value):
        raise NumericalOverflow(f"Alexander polynomial overflows at t={t}")
    return value


@lru_cache(maxsize=64)
def _torsion_taylor(knot: TorusKnot) -> np.ndarray:
    """Float coefficients a_n with tau(z) = sum_n a_n z^{2n-1}, highest first."""
    series = x_tau_series(knot, SERIES_ORDER)
    coefficients = [float(series[2 * n]) for n in range(1, SERIES_ORDER // 2)]
    return np.array(coefficients[::-1])


def _partial_geometric(n: int, u: np.ndarray) -> np.ndarray:
    """sinh(n u)/sinh(u) = sum_{l<n} e^{(n-1-2l) u}, finite at u in i*pi*Z."""
    return sum(np.exp((n - 1 - 2 * l) * u) for l in range(n))


def torsion(knot: TorusKnot, z: ArrayLike) -> ArrayLike:
    """
    Torsion function tau(z) = 2 sinh(mz) sinh(pz) / sinh(mpz).

    Vectorised over numpy arrays. Small |mpz| uses the Taylor series,
    large |Re mpz| an exponential form that cannot overflow, and points
    next to a removable zero of sinh(mpz) a factored form.

    Args:
        knot: Torus knot
        z: Complex scalar or array

    Returns:
        complex for scalar input, complex128 array otherwise

    Raises:
        PoleError: If z is within tolerance of a pole with nonzero residue
        NumericalOverflow: If the result is not finite
        DomainError: If z is not finite
    """
    z_arr = np.asarray(z, dtype=np.complex128)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if not np.all(np.isfinite(z_arr)):
        raise DomainError("torsion needs finite arguments")

    m, p, mp = knot.m, knot.p, knot.mp
    out = np.empty_like(z_arr)

    small = np.abs(mp * z_arr) < SERIES_RADIUS
    if small.any():
        zs = z_arr[small]
        out[small] = zs * np.polyval(_torsion_taylor(knot), zs * zs)

    direct = ~small & (np.abs(mp * z_arr.real) <= DIRECT_LIMIT)
    if direct.any():
        w = z_arr[direct]
        sm, sp, smp = np.sinh(m * w), np.sinh(p * w), np.sinh(mp * w)
        numerator = 2.0 * sm * sp
        near = np.abs(smp) < POLE_TOLERANCE * np.maximum(np.abs(sm * sp), 1.0)
        values = np.empty_like(w)
        regular = ~near
        values[regular] = numerator[regular] / smp[regular]
        for idx in np.flatnonzero(near):
            values[idx] = _near_zero_of_denominator(knot, w[idx])
        out[direct] = values

    far = ~small & ~direct
    if far.any():
        w = z_arr[far]
        sign = np.where(w.real > 0, 1.0, -1.0)
        u = sign * w
        values = (
            np.exp((m + p - mp) * u)
            * (1.0 - np.exp(-2 * m * u))
            * (1.0 - np.exp(-2 * p * u))
            / (1.0 - np.exp(-2 * mp * u))
        )
        out[far] = sign * values

    if not np.all(np.isfinite(out)):
        raise NumericalOverflow("torsion result is not finite")
    return complex(out[0]) if scalar else out


def _near_zero_of_denominator(knot: TorusKnot, w: complex) -> complex:
    m, p, mp = knot.m, knot.p, knot.mp
    j = int(round(w.imag * mp / math.pi))
    if j % m and j % p:
        raise PoleError(
            f"z={w} is at the pole i*pi*{j}/{mp} of the torsion function"
        )
    if j % p == 0:
        # sinh(mz) vanishes with sinh(mpz)
        return complex(2.0 * np.sinh(p * w) / _partial_geometric(p, np.asarray(m * w)))
    return complex(2.0 * np.sinh(m * w) / _partial_geometric(m, np.asarray(p * w)))


def torsion_mp(knot: TorusKnot, z):
    """tau(z) in the current mpmath precision (scalar); tau(0) = 0."""
    z = mpmath.mpmathify(z)
    if z == 0:
        return mpmath.mpc(0)
    # one exponential, integer powers for the three sinh factors
    e = mpmath.exp(z)
    em, ep = e ** knot.m, e ** knot.p
    emp = em ** knot.p
    return (em - 1 / em) * (ep - 1 / ep) / (emp - 1 / emp)


def pole_residue(knot: TorusKnot, j: int) -> float:
    """Residue of tau(pi z) at z_j = i j/(mp); exactly 0 for removable points."""
    if j % knot.m == 0 or j % knot.p == 0:
        return 0.0
    sign = 1.0 if (j + 1) % 2 == 0 else -1.0
    return sign * 2.0 * math.sin(math.pi * j / knot.m) * math.sin(math.pi * j / knot.p) / (knot.mp * math.pi)


def poles(knot: TorusKnot) -> List[PoleDatum]:
    """
    Poles z_j = i j/(mp), 0 < j < mp, of tau(pi z) with their residues.

    Residues vanish (the singularity is removable) when m | j or p | j.
    """
    data = []
    for j in range(1, knot.mp):
        data.append(PoleDatum(
            j=j,
            location=ComplexValue(re=0.0, im=j / knot.mp),
            residue=ComplexValue(re=pole_residue(knot, j), im=0.0),
        ))
    return data
