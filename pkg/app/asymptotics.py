# app/asymptotics.py
"""
Large-k expansion of the Kashaev invariant of a torus knot.

    e^{i pi (m/p + p/m)/(2k)} <L>_k = sum_j R_j(k) + sum_n T_n(k)

R_j are the residue contributions of the poles z_j = i j/(mp) and T_n the
terms of the asymptotic tail built from the Taylor coefficients of
x*tau(x). The tail diverges, so it is also searched for its smallest term.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from app.errors import DomainError, IndexOutOfRange, InvalidParameter
from app.exact_sum import kashaev_exact
from app.models import (
    ComplexValue,
    ExpansionReport,
    ExpansionTerm,
    OptimalTruncation,
    TorusKnot,
    VolumeRow,
    VolumeScan,
)
from app.phase import ExactPhase
from app.series import RationalSeries, default_order, even_derivative, x_tau_series
from app.utils.config import default_jobs
from app.utils.logger import setup_logger
from app.utils.summation import pairwise_sum

logger = setup_logger("asymptotics")

MAX_N_MAX = 10
TRUNCATION_SEARCH = 40


def prefactor(knot: TorusKnot, k: int) -> complex:
    """exp(i pi (m/p + p/m)/(2k)), the phase multiplying <L>_k."""
    return ExactPhase.of(knot.m ** 2 + knot.p ** 2, k * knot.mp).value()


def residue_term(knot: TorusKnot, k: int, j: int) -> complex:
    """
    R_j = 2 (2mp/k)^{-3/2} e^{i pi/4} (-1)^{(k-1)j} e^{-i pi k j^2/(2mp)} j^2 sin(pi j/m) sin(pi j/p).

    Raises:
        IndexOutOfRange: If j is outside 1..mp-1
    """
    n = knot.mp
    if not 1 <= j < n:
        raise IndexOutOfRange(f"pole index j must be in 1..{n - 1} (got {j})")
    if j % knot.m == 0 or j % knot.p == 0:
        return 0j
    sign = -1.0 if ((k - 1) * j) % 2 else 1.0
    # e^{i pi/4} e^{-i pi k j^2/(2mp)} as a single reduced phase
    phase = ExactPhase.of(n - 2 * k * j * j, 2 * n).value()
    magnitude = 2.0 * (2.0 * n / k) ** -1.5 * j * j * math.sin(math.pi * j / knot.m) * math.sin(math.pi * j / knot.p)
    return sign * magnitude * phase


def tail_term(knot: TorusKnot, k: int, n: int, series: Optional[RationalSeries] = None) -> complex:
    """
    T_n = (1/4) e^{i pi k mp/2} (1/n!) (i pi/(2 k mp))^{n-1} d^{2n}/dx^{2n}[x tau(x)] at 0.

    Args:
        knot: Torus knot
        k: Color
        n: Term index (>= 1)
        series: Precomputed x_tau_series of order > 2n

    Returns:
        T_n as a complex number
    """
    if n < 1:
        raise InvalidParameter(f"tail index must be >= 1 (got {n})")
    series = series or x_tau_series(knot, default_order(n))
    coefficient = float(Fraction(even_derivative(series, n), math.factorial(n)))
    phase = ExactPhase.of(k * knot.mp + (n - 1), 1).value()   # e^{i pi kmp/2} i^{n-1}
    return 0.25 * coefficient * (math.pi / (2 * k * knot.mp)) ** (n - 1) * phase


def optimal_truncation(knot: TorusKnot, k: int, search: int = TRUNCATION_SEARCH) -> OptimalTruncation:
    """Index of the smallest |T_n| for n <= search; ``within_search`` is False if still decreasing at the end."""
    series = x_tau_series(knot, default_order(search))
    magnitudes = [abs(tail_term(knot, k, n, series)) for n in range(1, search + 1)]
    best = int(np.argmin(magnitudes))
    return OptimalTruncation(
        n=best + 1,
        magnitude=magnitudes[best],
        within_search=best + 1 < search,
    )


def expansion(
    knot: TorusKnot,
    k: int,
    n_max: int = 3,
    precision: Optional[int] = None
) -> ExpansionReport:
    """
    Compare prefactor * <L>_k with the residue terms plus n_max tail terms.

    Args:
        knot: Torus knot
        k: Color (>= 2)
        n_max: Number of tail terms (1..10)
        precision: Working precision for the exact invariant

    Returns:
        ExpansionReport; abs_error is |prefactor*exact - reconstructed|
        and rel_error divides it by |exact|

    Raises:
        InvalidParameter: If k < 2 or n_max is out of range
    """
    if k < 2:
        raise InvalidParameter(f"expansion needs k >= 2 (got {k})")
    if not 1 <= n_max <= MAX_N_MAX:
        raise InvalidParameter(f"n_max must be in 1..{MAX_N_MAX} (got {n_max})")

    exact = kashaev_exact(knot, k, precision)
    phase = prefactor(knot, k)
    residues = [residue_term(knot, k, j) for j in range(1, knot.mp)]
    series = x_tau_series(knot, default_order(n_max))
    tails = [tail_term(knot, k, n, series) for n in range(1, n_max + 1)]
    reconstructed = pairwise_sum(residues + tails)

    abs_error = abs(phase * exact - reconstructed)
    rel_error = abs_error / abs(exact) if exact != 0 else math.inf
    logger.info(
        f"expansion T({knot.m},{knot.p}) k={k} n_max={n_max}: "
        f"abs_error={abs_error:.3e} rel_error={rel_error:.3e}"
    )
    return ExpansionReport(
        knot=knot,
        k=k,
        n_max=n_max,
        exact=ComplexValue.from_complex(exact),
        prefactor=ComplexValue.from_complex(phase),
        residue_terms=[ExpansionTerm(index=j, value=ComplexValue.from_complex(v))
                       for j, v in enumerate(residues, start=1)],
        tail_terms=[ExpansionTerm(index=n, value=ComplexValue.from_complex(v))
                    for n, v in enumerate(tails, start=1)],
        reconstructed=ComplexValue.from_complex(reconstructed),
        abs_error=abs_error,
        rel_error=rel_error,
        optimal_truncation=optimal_truncation(knot, k),
    )


def volume_scan(
    knot: TorusKnot,
    k_values: Sequence[int],
    precision: Optional[int] = None,
    jobs: Optional[int] = None
) -> VolumeScan:
    """
    |<L>_k| and log|<L>_k|/k over a range of colors.

    The growth exponent is the least-squares slope of log|<L>_k| against
    log k over the upper half of the range.

    Raises:
        InvalidParameter: If k_values is empty or not strictly ascending
        DomainError: If <L>_k vanishes for some k
    """
    ks = [int(k) for k in k_values]
    if not ks:
        raise InvalidParameter("volume scan needs at least one color")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise InvalidParameter("colors must be strictly ascending")

    workers = jobs or default_jobs()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        values = list(pool.map(lambda k: kashaev_exact(knot, k, precision), ks))

    rows: List[VolumeRow] = []
    for k, value in zip(ks, values):
        magnitude = abs(value)
        if magnitude == 0:
            raise DomainError(f"<L>_k vanishes at k={k}; log|<L>_k| is undefined")
        rows.append(VolumeRow(k=k, abs=magnitude, log_abs_over_k=math.log(magnitude) / k))

    exponent = None
    if len(rows) > 1:
        upper = rows[len(rows) // 2:]
        if len(upper) < 2:
            upper = rows
        slope, _ = np.polyfit(
            np.log([row.k for row in upper]),
            np.log([row.abs for row in upper]),
            1,
        )
        exponent = float(slope)

    logger.info(f"volume scan T({knot.m},{knot.p}) over {len(rows)} colors: exponent={exponent}")
    return VolumeScan(knot=knot, rows=rows, fitted_exponent=exponent, fitted_limit=rows[-1].log_abs_over_k)
