# app/quadrature.py
"""
Contour integration along rotated lines C_phi = {x e^{i phi}} and around
poles, plus the identity checks built on it.

Double precision uses an adaptive Gauss-Kronrod 7/15 rule vectorised over
panels. Integrals whose result is many orders of magnitude smaller than
the integrand's peak are integrated with mpmath Gauss-Legendre panels at a
working precision large enough to absorb the cancellation.
"""

import cmath
import math
import sys
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import mpmath
import numpy as np
from mpmath.calculus.quadrature import GaussLegendre

from app.errors import (
    ContourConditionViolated,
    DomainError,
    InvalidParameter,
    NoConvergence,
    NonFiniteSample,
    NumericalOverflow,
    ToleranceNotMet,
)
from app.exact_sum import gauss_sum, kashaev_exact
from app.knot import pole_residue, torsion, torsion_mp
from app.models import ComplexValue, ContourSpec, IdentityCheck, QuadratureResult, ShiftCheck, TorusKnot
from app.phase import ExactPhase
from app.utils.config import DOUBLE_PRECISION_BITS
from app.utils.logger import setup_logger
from app.utils.summation import pairwise_sum

logger = setup_logger("quadrature")

EPS = sys.float_info.epsilon

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 13]] = _WG[0]
GAUSS_WEIGHTS[[3, 11]] = _WG[1]
GAUSS_WEIGHTS[[5, 9]] = _WG[2]
GAUSS_WEIGHTS[7] = _WG[3]

GUARD_BITS = 24            # covers rounding over up to 2^20 summed samples
TAIL_MARGIN = 10.0          # nats kept beyond ln(1/tol) when cutting the Gaussian tail
DOUBLE_ROUNDING = 1e-15     # relative accuracy of a cancellation-free double quadrature
MAX_DOUBLE_EXPONENT = 700.0
NODE_GRID_BITS = 256        # Gauss-Legendre nodes are computed on this precision grid
PANEL_MARGIN = 0.8          # share of the largest half-panel phase the error model allows
POLE_CLEARANCE = 6.0        # half-panel widths between the contour and the nearest pole of g


@dataclass(frozen=True)
class GaussianIntegrand:
    """
    f(z) = exp(c1 z + c2 z^2 - shift) * g(z) with g of at most exponential growth.

    ``smooth`` evaluates g on numpy arrays, ``smooth_mp`` on an mpmath scalar.
    ``coefficients_mp`` rebuilds (c1, c2) at the current mpmath precision so
    that constants such as pi are not frozen at double precision. ``growth``
    bounds log|g(x e^{i phi})| by growth*|x| plus a constant. The poles of g
    closest to the origin sit at +-i*pole_spacing.
    """
    c1: complex
    c2: complex
    smooth: Callable[[np.ndarray], np.ndarray]
    smooth_mp: Callable
    growth: float = 0.0
    coefficients_mp: Optional[Callable[[], Tuple]] = None
    shift: float = 0.0
    pole_spacing: float = math.inf

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return np.exp(self.c1 * z + self.c2 * z * z - self.shift) * self.smooth(z)

    def with_shift(self, shift: float) -> "GaussianIntegrand":
        return replace(self, shift=shift)

    def mp_evaluator(self) -> Callable:
        if self.coefficients_mp is not None:
            c1, c2 = self.coefficients_mp()
        else:
            c1, c2 = mpmath.mpmathify(self.c1), mpmath.mpmathify(self.c2)
        shift = mpmath.mpf(self.shift)
        smooth = self.smooth_mp

        def evaluate(z):
            return mpmath.exp(c1 * z + c2 * z * z - shift) * smooth(z)
        return evaluate

    def decay(self, phi: float) -> float:
        """a in Re(exponent) = b x - a x^2 along C_phi; must be positive."""
        return -(self.c2 * cmath.exp(2j * phi)).real

    def slope(self, phi: float) -> float:
        return (self.c1 * cmath.exp(1j * phi)).real

    def log_peak(self, phi: float) -> float:
        b = self.slope(phi)
        return b * b / (4 * self.decay(phi))

    def log_mass(self, phi: float) -> float:
        """log of the integral of |exp(c1 z + c2 z^2)| along C_phi."""
        return self.log_peak(phi) + 0.5 * math.log(math.pi / self.decay(phi))

    def truncation(self, phi: float, log_drop: float) -> float:
        """Half-width beyond which the Gaussian envelope is below e^{-log_drop} of its peak."""
        a = self.decay(phi)
        centre = (abs(self.slope(phi)) + self.growth) / (2 * a)
        return centre + math.sqrt(max(log_drop, 1.0) / a)

    def rate(self, x: float, phi: float) -> float:
        """|d/dx exponent| along C_phi: local oscillation plus growth."""
        d = cmath.exp(1j * phi)
        return abs(self.c1 * d + 2 * self.c2 * d * d * x) + self.growth

    def pole_gap(self, phi: float) -> float:
        """Distance from C_phi to the nearest pole of g."""
        return self.pole_spacing * abs(math.cos(phi))


def lemma1_integrand(knot: TorusKnot, k: int, h: complex) -> GaussianIntegrand:
    """exp(mp(kz - z^2/h)) tau(z)"""
    n = knot.mp
    h = complex(h)
    return GaussianIntegrand(
        c1=complex(n * k),
        c2=-n / h,
        smooth=lambda z: torsion(knot, z),
        smooth_mp=lambda z: torsion_mp(knot, z),
        growth=float(max(0, knot.m + knot.p - n)),
        coefficients_mp=lambda: (mpmath.mpf(n * k), -n / mpmath.mpc(h)),
        pole_spacing=math.pi / n,
    )


def lemma2_integrand(knot: TorusKnot, k: int) -> GaussianIntegrand:
    """exp(pi mp k (z + i z^2/2)) z^2 tau(pi z)"""
    n = knot.mp * k
    return GaussianIntegrand(
        c1=complex(math.pi * n),
        c2=0.5j * math.pi * n,
        smooth=lambda z: z * z * torsion(knot, math.pi * z),
        smooth_mp=lambda z: z * z * torsion_mp(knot, mpmath.pi * z),
        growth=math.pi * max(0, knot.m + knot.p - knot.mp),
        coefficients_mp=lambda: (mpmath.pi * n, mpmath.mpc(0, mpmath.pi * n / 2)),
        pole_spacing=1.0 / knot.mp,
    )


def shifted_integrand(knot: TorusKnot, k: int) -> GaussianIntegrand:
    """exp(i pi mp k z^2/2) z tau(pi z)"""
    n = knot.mp * k
    return GaussianIntegrand(
        c1=0j,
        c2=0.5j * math.pi * n,
        smooth=lambda z: z * torsion(knot, math.pi * z),
        smooth_mp=lambda z: z * torsion_mp(knot, mpmath.pi * z),
        growth=math.pi * max(0, knot.m + knot.p - knot.mp),
        coefficients_mp=lambda: (mpmath.mpc(0), mpmath.mpc(0, mpmath.pi * n / 2)),
        pole_spacing=1.0 / knot.mp,
    )


def _kronrod_panels(f, direction: complex, a: np.ndarray, b: np.ndarray):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    z = (x * direction).ravel()
    fz = np.broadcast_to(np.asarray(f(z), dtype=np.complex128), z.shape).reshape(x.shape) * direction
    if not np.all(np.isfinite(fz)):
        raise NonFiniteSample("integrand returned a non-finite sample on the contour")
    kronrod = half * (fz @ KRONROD_WEIGHTS)
    gauss = half * (fz @ GAUSS_WEIGHTS)
    resabs = half * (np.abs(fz) @ KRONROD_WEIGHTS)
    return kronrod, np.abs(kronrod - gauss), resabs


def line_integrate(f: Callable, c: ContourSpec) -> QuadratureResult:
    """
    Integrate f(x e^{i phi}) e^{i phi} over x in [-X, X].

    The interval starts as ``c.panels`` equal panels. Each round, every
    panel whose |K15 - G7| exceeds its width-proportional share of
    max(tol*|I|, 64*eps*int|f|) is bisected; the rest are frozen.

    Args:
        f: Vectorised integrand accepting a complex numpy array
        c: Contour; ``truncation`` must be set

    Returns:
        QuadratureResult with the summed error estimate

    Raises:
        InvalidParameter: If no truncation is given
        ToleranceNotMet: If the panel budget runs out (achieved error attached)
        NonFiniteSample: If f returns NaN or infinity
    """
    if c.truncation is None:
        raise InvalidParameter("line_integrate needs an explicit truncation X")
    X = c.truncation
    direction = cmath.exp(1j * c.phi)
    edges = np.linspace(-X, X, c.panels + 1)
    a, b = edges[:-1], edges[1:]

    done_a: List[np.ndarray] = []
    done_value: List[np.ndarray] = []
    done_error: List[np.ndarray] = []
    done_abs: List[np.ndarray] = []
    evaluations = 0

    while True:
        value, error, resabs = _kronrod_panels(f, direction, a, b)
        evaluations += NODES.size * a.size
        total = sum(v.sum() for v in done_value) + value.sum()
        total_abs = sum(v.sum() for v in done_abs) + resabs.sum()
        target = max(c.tol * abs(total), 64 * EPS * total_abs)
        good = error <= target * (b - a) / (2 * X)

        done_a.append(a[good])
        done_value.append(value[good])
        done_error.append(error[good])
        done_abs.append(resabs[good])

        bad = ~good
        if not bad.any():
            break
        frozen = sum(v.size for v in done_a)
        if frozen + 2 * int(bad.sum()) > c.max_panels:
            achieved = (sum(e.sum() for e in done_error) + error[bad].sum()) / max(abs(total), EPS)
            raise ToleranceNotMet(
                f"quadrature budget of {c.max_panels} panels exhausted at relative error {achieved:.2e}",
                achieved=float(achieved),
            )
        middle = 0.5 * (a[bad] + b[bad])
        a, b = np.concatenate([a[bad], middle]), np.concatenate([middle, b[bad]])
        order = np.argsort(a, kind="stable")
        a, b = a[order], b[order]

    position = np.concatenate(done_a)
    order = np.argsort(position, kind="stable")
    values = np.concatenate(done_value)[order]
    total_error = float(np.concatenate(done_error).sum())
    return QuadratureResult(
        value=ComplexValue.from_complex(pairwise_sum(values)),
        error=total_error,
        panels=int(position.size),
        evaluations=evaluations,
        precision=DOUBLE_PRECISION_BITS,
    )


def _gl_degree(bits: int) -> int:
    """mpmath degree d of the 3*2^(d-1) point rule used at this precision."""
    return min(7, max(4, 1 + math.ceil(math.log2(bits / 21))))


@lru_cache(maxsize=16)
def _gauss_legendre(degree: int, grid_bits: int) -> Tuple[tuple, tuple]:
    """Nodes and weights of the degree-d Gauss-Legendre rule on [-1, 1]."""
    pairs = GaussLegendre(mpmath.mp).calc_nodes(degree, grid_bits)
    return tuple(x for x, _ in pairs), tuple(w for _, w in pairs)


def _half_phase(nodes: int, bits: int) -> float:
    """
    Largest half-panel phase for which an n-point rule reaches 2^-bits.

    The error of the n-point rule on e^{i w t}, t in [-1, 1], behaves like
    (e w / (4 n))^{2n}; PANEL_MARGIN keeps w below that limit.
    """
    return PANEL_MARGIN * (4 * nodes / math.e) * 2.0 ** (-bits / (2 * nodes))


def _panel_edges(integrand: GaussianIntegrand, c: ContourSpec, half_phase: float) -> List[float]:
    X = c.truncation
    widest = 2 * X / c.panels
    if math.isfinite(integrand.pole_spacing):
        widest = min(widest, 2 * integrand.pole_gap(c.phi) / POLE_CLEARANCE)
    edges = [-X]
    x = -X
    while x < X:
        step = min(widest, 2 * half_phase / integrand.rate(x, c.phi))
        step = min(step, 2 * half_phase / integrand.rate(min(x + step, X), c.phi))
        x = min(x + step, X)
        edges.append(x)
        if len(edges) - 1 > c.max_panels:
            raise ToleranceNotMet(
                f"contour needs more than {c.max_panels} panels at phi={c.phi:.4f}",
                achieved=float("inf"),
            )
    return edges


def _panel_error(fine, coarse, width, peak, nodes: int):
    """
    Error of the fine rule on one panel from its distance to the half-size rule.

    When the half-size rule already converges, the error model gives
    err(n) = err(n/2)^2 / (4^n * width * peak); otherwise the difference
    itself is returned.
    """
    diff = abs(fine - coarse)
    mass = width * peak
    if mass == 0:
        return diff
    if diff <= mass * mpmath.ldexp(1, -nodes):
        return diff * diff / (mass * mpmath.ldexp(1, 2 * nodes))
    return diff


def line_integrate_mp(
    integrand: GaussianIntegrand,
    c: ContourSpec,
    bits: int,
    log_scale: float = 0.0
) -> QuadratureResult:
    """
    Extended-precision counterpart of line_integrate.

    The integrand is evaluated as exp(-log_scale) * f so that panel values
    stay near unity; the result is scaled back in mpmath before conversion.
    Every panel is integrated with a fixed Gauss-Legendre rule and checked
    against the rule of half the size. Panel widths follow the local phase
    rate so that the fixed rule converges, and stay clear of the poles of g.

    Args:
        integrand: Gaussian-type integrand
        c: Contour with truncation set
        bits: Working precision in bits
        log_scale: Natural log of the normalisation (usually the log-peak)

    Returns:
        QuadratureResult at the requested precision

    Raises:
        ToleranceNotMet: If the combined panel error exceeds tol relative
        NonFiniteSample: If the result is not finite
    """
    if c.truncation is None:
        raise InvalidParameter("line_integrate_mp needs an explicit truncation X")
    degree = _gl_degree(bits)
    grid_bits = NODE_GRID_BITS * math.ceil(bits / NODE_GRID_BITS)
    fine_nodes, fine_weights = _gauss_legendre(degree, grid_bits)
    coarse_nodes, coarse_weights = _gauss_legendre(degree - 1, grid_bits)
    size = len(fine_nodes)
    edges = _panel_edges(integrand, c, _half_phase(size, bits))

    with mpmath.workprec(bits):
        direction = mpmath.expj(c.phi)
        evaluate = integrand.with_shift(log_scale).mp_evaluator()
        values, errors = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid = mpmath.mpf(lo + hi) / 2
            half = mpmath.mpf(hi - lo) / 2
            samples = [evaluate((mid + half * t) * direction) for t in fine_nodes]
            fine = half * mpmath.fdot(fine_weights, samples)
            coarse = half * mpmath.fdot(
                coarse_weights, [evaluate((mid + half * t) * direction) for t in coarse_nodes]
            )
            peak = max(abs(s) for s in samples)
            values.append(fine)
            errors.append(_panel_error(fine, coarse, 2 * half, peak, size))

        scale = mpmath.exp(log_scale)
        value = mpmath.fsum(values) * direction * scale
        error = mpmath.fsum(errors) * scale
        if mpmath.isnan(value) or mpmath.isinf(value):
            raise NonFiniteSample("extended-precision quadrature produced a non-finite value")
        magnitude = abs(value)
        relative = error / magnitude if magnitude else error
        if relative > c.tol:
            raise ToleranceNotMet(
                f"extended-precision quadrature reached {float(relative):.2e} > tol {c.tol:.1e}",
                achieved=float(relative),
            )
        result = complex(value)
        abs_error = float(error)

    if not cmath.isfinite(result):
        raise NumericalOverflow("integral exceeds the double-precision range")
    panels = len(edges) - 1
    logger.debug(f"mpmath quadrature: {panels} panels of {size} nodes at {bits} bits")
    return QuadratureResult(
        value=ComplexValue.from_complex(result),
        error=abs_error,
        panels=panels,
        evaluations=panels * (size + len(coarse_nodes)),
        precision=bits,
    )


def precision_for(cancellation: float, tol: float, precision: Optional[int] = None) -> int:
    """
    Bits that leave log2(1/tol) significant bits after e^{cancellation} of
    cancellation, rounded up to a multiple of 32.
    """
    bits = math.ceil(max(cancellation, 0.0) / math.log(2)) + math.ceil(math.log2(1 / tol)) + GUARD_BITS
    bits = 32 * math.ceil(bits / 32)
    return max(bits, precision or DOUBLE_PRECISION_BITS)


def integrate_gaussian(
    integrand: GaussianIntegrand,
    c: ContourSpec,
    log_result: Optional[float] = None,
    precision: Optional[int] = None
) -> Tuple[QuadratureResult, float]:
    """
    Integrate a Gaussian-type integrand along C_phi, choosing truncation and
    working precision from the envelope.

    Args:
        integrand: Gaussian-type integrand
        c: Contour; a missing truncation is derived from the decay rate
        log_result: Expected log|result|, used to measure cancellation
        precision: Minimum working precision in bits

    Returns:
        (QuadratureResult, truncation X actually used)

    Raises:
        ContourConditionViolated: If the Gaussian does not decay along C_phi
    """
    a = integrand.decay(c.phi)
    if a <= 0:
        raise ContourConditionViolated(
            f"integrand does not decay along phi={c.phi:.6f} (decay rate {a:.3e})"
        )
    log_peak = integrand.log_peak(c.phi)
    cancellation = 0.0 if log_result is None else max(0.0, integrand.log_mass(c.phi) - log_result)
    X = c.truncation or integrand.truncation(c.phi, cancellation + math.log(1 / c.tol) + TAIL_MARGIN)
    contour = c.model_copy(update={"truncation": X})

    extended = (
        cancellation > math.log(c.tol / DOUBLE_ROUNDING)
        or log_peak > MAX_DOUBLE_EXPONENT
        or (precision or DOUBLE_PRECISION_BITS) > DOUBLE_PRECISION_BITS
    )
    if extended:
        bits = precision_for(cancellation, c.tol, precision)
        logger.info(
            f"extended precision {bits} bits for cancellation {cancellation:.1f} nats "
            f"(phi={c.phi:.4f}, X={X:.3f})"
        )
        return line_integrate_mp(integrand, contour, bits, log_scale=log_peak), X

    result = line_integrate(integrand.with_shift(log_peak), contour)
    scale = math.exp(log_peak)
    value = result.value.to_complex() * scale
    if not cmath.isfinite(value):
        raise NumericalOverflow("integral exceeds the double-precision range")
    logger.debug(f"double quadrature: {result.panels} panels, {result.evaluations} evaluations")
    return result.model_copy(update={
        "value": ComplexValue.from_complex(value),
        "error": result.error * scale,
    }), X


def continued_sqrt(h: complex, steps: int = 64) -> complex:
    """sqrt(h) continued from sqrt(1) = 1 along the segment [1, h]."""
    h = complex(h)
    if h.imag == 0 and h.real <= 0:
        raise DomainError(f"segment from 1 to h={h} passes through the branch point 0")
    root = 1 + 0j
    for t in np.linspace(0.0, 1.0, steps + 1)[1:]:
        candidate = cmath.sqrt(1 + t * (h - 1))
        if abs(candidate + root) < abs(candidate - root):
            candidate = -candidate
        root = candidate
    return root


def default_lemma1_phi(h: complex) -> float:
    """Line through the saddle point kh/2 when Re h > 0, otherwise the fastest decay."""
    h = complex(h)
    return cmath.phase(h) if h.real > 0 else cmath.phase(h) / 2


def _rel_diff(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), sys.float_info.min)


def _safe_log(x: float) -> Optional[float]:
    return math.log(x) if x > 0 else None


def verify_lemma1(
    knot: TorusKnot,
    k: int,
    h: complex,
    c: Optional[ContourSpec] = None,
    precision: Optional[int] = None
) -> IdentityCheck:
    """
    Compare the Gaussian sum with its integral representation
    sqrt(mp/(pi h)) e^{-(h/4)(m/p+p/m)} int_{C_phi} e^{mp(kz - z^2/h)} tau(z) dz.

    Raises:
        ContourConditionViolated: If Re(h e^{-2 i phi}) <= 0
    """
    h = complex(h)
    if h == 0:
        raise DomainError("h must be nonzero")
    c = c or ContourSpec(phi=default_lemma1_phi(h))
    if (h * cmath.exp(-2j * c.phi)).real <= 0:
        raise ContourConditionViolated(
            f"Re(h e^(-2i phi)) must be positive (h={h}, phi={c.phi:.6f})"
        )
    m, p, n = knot.m, knot.p, knot.mp
    lhs = gauss_sum(knot, k, h)
    prefactor = math.sqrt(n / math.pi) / continued_sqrt(h) * cmath.exp(-h * (m * m + p * p) / (4 * n))
    log_lhs = _safe_log(abs(lhs))
    log_result = None if log_lhs is None else log_lhs - math.log(abs(prefactor))

    result, X = integrate_gaussian(lemma1_integrand(knot, k, h), c, log_result, precision)
    rhs = prefactor * result.value.to_complex()
    check = IdentityCheck(
        lhs=ComplexValue.from_complex(lhs),
        rhs=ComplexValue.from_complex(rhs),
        rel_diff=_rel_diff(lhs, rhs),
        phi=c.phi,
        truncation=X,
        panels=result.panels,
        precision=result.precision,
        error=result.error * abs(prefactor),
    )
    logger.info(f"lemma1 T({m},{p}) k={k} h={h}: rel_diff={check.rel_diff:.2e}")
    return check


def lemma2_scale(knot: TorusKnot, k: int) -> complex:
    """(mpk/2)^{3/2} e^{-i pi (m/p + p/m + k/2)/(2k)}"""
    n = knot.mp * k
    phase = ExactPhase.of(-2 * (knot.m ** 2 + knot.p ** 2) - n, 2 * n).value()
    return (n / 2) ** 1.5 * phase


def _check_lemma2_phi(phi: float) -> None:
    if not 0 < phi < math.pi / 2:
        raise ContourConditionViolated(f"phi must lie in (0, pi/2) (got {phi})")


def verify_lemma2(
    knot: TorusKnot,
    k: int,
    c: Optional[ContourSpec] = None,
    precision: Optional[int] = None
) -> IdentityCheck:
    """
    Compare 2<L>_k with (mpk/2)^{3/2} e^{-i pi (m/p+p/m+k/2)/(2k)}
    int_{C_phi} e^{pi mp k (z + i z^2/2)} z^2 tau(pi z) dz.

    Along C_phi the integrand peaks at exp(pi mp k cot(phi)/4), far above the
    result, so the integral normally runs in extended precision.

    Raises:
        ContourConditionViolated: Unless 0 < phi < pi/2
    """
    c = c or ContourSpec(phi=math.pi / 4)
    _check_lemma2_phi(c.phi)
    lhs = 2 * kashaev_exact(knot, k, precision)
    scale = lemma2_scale(knot, k)
    log_lhs = _safe_log(abs(lhs))
    log_result = None if log_lhs is None else log_lhs - math.log(abs(scale))

    result, X = integrate_gaussian(lemma2_integrand(knot, k), c, log_result, precision)
    rhs = scale * result.value.to_complex()
    check = IdentityCheck(
        lhs=ComplexValue.from_complex(lhs),
        rhs=ComplexValue.from_complex(rhs),
        rel_diff=_rel_diff(lhs, rhs),
        phi=c.phi,
        truncation=X,
        panels=result.panels,
        precision=result.precision,
        error=result.error * abs(scale),
    )
    logger.info(f"lemma2 T({knot.m},{knot.p}) k={k} phi={c.phi:.4f}: rel_diff={check.rel_diff:.2e}")
    return check


def _shifted(knot: TorusKnot, k: int, c: ContourSpec, precision: Optional[int]):
    result, X = integrate_gaussian(shifted_integrand(knot, k), c, None, precision)
    phase = ExactPhase.of(knot.mp * k, 1).value()
    return -2j * phase * result.value.to_complex(), result, X


def shifted_integral(
    knot: TorusKnot,
    k: int,
    c: Optional[ContourSpec] = None,
    precision: Optional[int] = None
) -> complex:
    """
    The Kashaev contour integral along i + C_phi, rewritten on C_phi:
    -2i e^{i pi mp k/2} int_{C_phi} e^{i pi mp k z^2/2} z tau(pi z) dz.
    """
    c = c or ContourSpec(phi=math.pi / 4)
    _check_lemma2_phi(c.phi)
    value, _, _ = _shifted(knot, k, c, precision)
    return value


def lemma2_residues(knot: TorusKnot, k: int) -> List[complex]:
    """2 pi i times the residue of the Kashaev integrand at z_j, j = 1..mp-1."""
    n = knot.mp
    out = []
    for j in range(1, n):
        sign = -1.0 if (k * j) % 2 else 1.0
        phase = ExactPhase.of(-k * j * j, n).value()
        z_squared = -(j * j) / (n * n)
        out.append(2j * math.pi * sign * phase * z_squared * pole_residue(knot, j))
    return out


def verify_shift(
    knot: TorusKnot,
    k: int,
    c: Optional[ContourSpec] = None,
    precision: Optional[int] = None
) -> ShiftCheck:
    """
    Check int_{C_phi} F = int_{i + C_phi} F + 2 pi i sum_j Res_{z_j} F for the
    Kashaev integrand F, the poles z_j = i j/(mp) lying between the two lines.
    """
    c = c or ContourSpec(phi=math.pi / 4)
    _check_lemma2_phi(c.phi)
    lhs = 2 * kashaev_exact(knot, k, precision)
    log_lhs = _safe_log(abs(lhs))
    log_result = None if log_lhs is None else log_lhs - math.log(abs(lemma2_scale(knot, k)))

    direct, X = integrate_gaussian(lemma2_integrand(knot, k), c, log_result, precision)
    shifted, _, _ = _shifted(knot, k, c, precision)
    residue_sum = pairwise_sum(lemma2_residues(knot, k))
    direct_value = direct.value.to_complex()
    return ShiftCheck(
        direct=direct.value,
        shifted=ComplexValue.from_complex(shifted),
        residue_sum=ComplexValue.from_complex(residue_sum),
        rel_diff=_rel_diff(direct_value, shifted + residue_sum),
        phi=c.phi,
        truncation=X,
        panels=direct.panels,
        precision=direct.precision,
    )


def _circle_samples(f: Callable, center: complex, radius: float, theta: np.ndarray) -> np.ndarray:
    """f(z) (z - center) at z = center + radius e^{i theta}."""
    w = radius * np.exp(1j * theta)
    g = np.asarray(f(center + w), dtype=np.complex128) * w
    if not np.all(np.isfinite(g)):
        raise NonFiniteSample("integrand is not finite on the circle")
    return g


def _trapezoid_circle(f: Callable, center: complex, radius: float, nodes: int) -> complex:
    """(1/(2 pi i)) times the n-point trapezoid rule for the integral of f around the circle."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    return complex(np.mean(_circle_samples(f, complex(center), radius, theta)))


def residue_circle(
    f: Callable,
    center: complex,
    radius: float,
    tol: float = 1e-13,
    max_nodes: int = 1 << 16
) -> complex:
    """
    Residue of f inside the circle |z - center| = radius by the trapezoid rule.

    The node count starts at 16 and doubles (reusing previous nodes) until
    two successive results agree to tol relative to max(|result|, mean|f dz|).

    Raises:
        NoConvergence: If max_nodes is reached first
    """
    if radius <= 0:
        raise InvalidParameter(f"radius must be positive (got {radius})")
    center = complex(center)

    n = 16
    g = _circle_samples(f, center, radius, 2 * np.pi * np.arange(n) / n)
    total, total_abs = g.sum(), np.abs(g).sum()
    estimate = total / n
    while 2 * n <= max_nodes:
        g = _circle_samples(f, center, radius, 2 * np.pi * (np.arange(n) + 0.5) / n)
        total, total_abs = total + g.sum(), total_abs + np.abs(g).sum()
        n *= 2
        refined = total / n
        if abs(refined - estimate) <= tol * max(abs(refined), total_abs / n):
            return complex(refined)
        estimate = refined
    raise NoConvergence(
        f"trapezoid rule on the circle did not settle with {max_nodes} nodes",
        estimate=complex(estimate),
    )
