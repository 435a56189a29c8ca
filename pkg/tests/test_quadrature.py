"""
Unit tests for contour quadrature and the integral identities
"""

import cmath
import math
import time
from dataclasses import replace

import mpmath
import numpy as np
import pytest
from app.asymptotics import prefactor, tail_term
from app.errors import (
    ContourConditionViolated,
    DomainError,
    InvalidParameter,
    NoConvergence,
    NonFiniteSample,
    ToleranceNotMet,
)
from app.knot import pole_residue, torsion, torsion_mp
from app.models import ContourSpec, TorusKnot
from app.quadrature import (
    GaussianIntegrand,
    continued_sqrt,
    integrate_gaussian,
    lemma2_integrand,
    lemma2_residues,
    lemma2_scale,
    line_integrate,
    line_integrate_mp,
    residue_circle,
    shifted_integral,
    shifted_integrand,
    _trapezoid_circle,
    verify_lemma1,
    verify_lemma2,
    verify_shift,
)

TREFOIL = TorusKnot(m=2, p=3)


def plain_gaussian(c1=0.0, c2=-1.0):
    return GaussianIntegrand(
        c1=complex(c1),
        c2=complex(c2),
        smooth=lambda z: np.ones_like(z),
        smooth_mp=lambda z: mpmath.mpf(1),
    )


class TestLineIntegrate:
    """Test cases for the adaptive Gauss-Kronrod rule"""

    def test_gaussian(self):
        """Test the integral of exp(-x^2)"""
        result = line_integrate(lambda z: np.exp(-z * z), ContourSpec(truncation=8.0))

        assert result.value.to_complex() == pytest.approx(math.sqrt(math.pi), rel=1e-13)
        assert result.precision == 53
        assert result.evaluations >= 15 * result.panels

    def test_rotated_line(self):
        """Test that rotating the line keeps the value when nothing is crossed"""
        result = line_integrate(lambda z: np.exp(-z * z), ContourSpec(phi=0.3, truncation=9.0))

        assert result.value.to_complex() == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_adaptive_refinement(self):
        """Test that a narrow peak forces bisection"""
        f = lambda z: np.exp(-400 * (z - 0.3) ** 2)
        result = line_integrate(f, ContourSpec(truncation=2.0, panels=2))

        assert result.panels > 2
        assert result.value.to_complex() == pytest.approx(math.sqrt(math.pi / 400), rel=1e-12)

    def test_odd_integrand_vanishes(self):
        """Test that an odd integrand integrates to zero on the symmetric panels"""
        result = line_integrate(lambda z: z * np.exp(-z * z), ContourSpec(truncation=8.0))

        assert abs(result.value.to_complex()) <= 1e-14

    def test_requires_truncation(self):
        """Test that a missing truncation is refused"""
        with pytest.raises(InvalidParameter):
            line_integrate(lambda z: np.exp(-z * z), ContourSpec())

    def test_budget_exhausted(self):
        """Test that the achieved error is reported when the budget runs out"""
        f = lambda z: np.exp(300j * z - z * z)
        with pytest.raises(ToleranceNotMet) as info:
            line_integrate(f, ContourSpec(truncation=6.0, panels=1, max_panels=4))
        assert info.value.achieved > 1e-12

    def test_non_finite_sample(self):
        """Test that NaN samples abort the integration"""
        with pytest.raises(NonFiniteSample):
            line_integrate(lambda z: np.full(z.shape, np.nan, dtype=complex), ContourSpec(truncation=1.0))


class TestGaussianIntegrand:
    """Test cases for Gaussian-type integrands"""

    def test_envelope(self):
        """Test decay, peak and truncation of exp(2x - x^2)"""
        g = plain_gaussian(c1=2.0)

        assert g.decay(0.0) == pytest.approx(1.0)
        assert g.log_peak(0.0) == pytest.approx(1.0)
        assert g.truncation(0.0, 40.0) == pytest.approx(1.0 + math.sqrt(40.0))

    def test_double_precision(self):
        """Test exp(2x - x^2) integrates to sqrt(pi) e"""
        result, X = integrate_gaussian(plain_gaussian(c1=2.0), ContourSpec())

        assert X > 6
        assert result.value.to_complex() == pytest.approx(math.sqrt(math.pi) * math.e, rel=1e-12)

    def test_extended_precision(self):
        """Test the mpmath path on the same integral"""
        result, _ = integrate_gaussian(plain_gaussian(c1=2.0), ContourSpec(), precision=128)

        assert result.precision >= 128
        assert result.value.to_complex() == pytest.approx(math.sqrt(math.pi) * math.e, rel=1e-14)

    def test_mp_rule_directly(self):
        """Test line_integrate_mp with an explicit truncation"""
        result = line_integrate_mp(plain_gaussian(), ContourSpec(truncation=10.0), bits=128)

        assert result.value.to_complex() == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_gaussian_identity(self):
        """Test sqrt(pi h) e^{h w^2} = int exp(-z^2/h + 2wz) dz at random complex (h, w)"""
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(20):
            h = rng.uniform(0.2, 2.0) * cmath.exp(1j * rng.uniform(-2.5, 2.5))
            w = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
            phi = cmath.phase(h) / 2
            result, _ = integrate_gaussian(plain_gaussian(c1=2 * w, c2=-1 / h), ContourSpec(phi=phi))
            expected = cmath.sqrt(math.pi * h) * cmath.exp(h * w * w)
            worst = max(worst, abs(result.value.to_complex() - expected) / abs(expected))

        assert worst <= 1e-10

    def test_no_decay(self):
        """Test that a growing Gaussian is refused"""
        with pytest.raises(ContourConditionViolated):
            integrate_gaussian(plain_gaussian(c2=1.0), ContourSpec())


class TestContinuedSqrt:
    """Test cases for the continued square root"""

    def test_matches_principal_branch_off_the_cut(self):
        """Test agreement with cmath.sqrt away from the negative axis"""
        for h in (0.1, 0.05 + 0.2j, -1 + 0.001j, -1 - 0.001j, 3j):
            assert continued_sqrt(h) == pytest.approx(cmath.sqrt(h), rel=1e-14)

    def test_branch_point_on_segment(self):
        """Test that negative real h is refused"""
        with pytest.raises(DomainError):
            continued_sqrt(-2.0)


class TestLemma1:
    """Test cases for the Gaussian sum integral identity"""

    @pytest.mark.parametrize("m,p", [(2, 3), (3, 5), (2, 7)])
    @pytest.mark.parametrize("k", [3, 4, 7, 10])
    @pytest.mark.parametrize("h", [0.1, 0.05 + 0.2j])
    def test_identity(self, m, p, k, h):
        """Test the integral representation of the Gaussian sum"""
        check = verify_lemma1(TorusKnot(m=m, p=p), k, h)

        assert check.rel_diff <= 1e-8
        assert check.truncation > 0

    def test_phi_independence(self):
        """Test that admissible angles give the same integral"""
        values = [verify_lemma1(TREFOIL, 4, 0.1, ContourSpec(phi=phi)).rhs.to_complex()
                  for phi in (-0.3, 0.0, 0.3)]
        for value in values[1:]:
            assert value == pytest.approx(values[0], rel=1e-9)

    def test_truncation_soundness(self):
        """Test that widening the truncation changes nothing"""
        automatic = verify_lemma1(TREFOIL, 7, 0.05 + 0.2j)
        wider = verify_lemma1(
            TREFOIL, 7, 0.05 + 0.2j,
            ContourSpec(phi=automatic.phi, truncation=1.5 * automatic.truncation),
        )
        assert wider.rhs.to_complex() == pytest.approx(automatic.rhs.to_complex(), rel=1e-10)

    def test_contour_condition(self):
        """Test that Re(h e^{-2i phi}) <= 0 is refused"""
        with pytest.raises(ContourConditionViolated):
            verify_lemma1(TREFOIL, 3, 0.1, ContourSpec(phi=math.pi / 3))


class TestLemma2:
    """Test cases for the Kashaev integral identity"""

    @pytest.mark.parametrize("m,p", [(2, 3), (3, 4)])
    @pytest.mark.parametrize("phi", [math.pi / 6, math.pi / 4, math.pi / 3])
    def test_identity(self, m, p, phi):
        """Test the integral representation at k = 5"""
        check = verify_lemma2(TorusKnot(m=m, p=p), 5, ContourSpec(phi=phi))

        assert check.rel_diff <= 1e-7
        assert check.precision > 53

    @pytest.mark.slow
    @pytest.mark.parametrize("m,p", [(2, 3), (3, 4)])
    @pytest.mark.parametrize("k", [21, 51])
    @pytest.mark.parametrize("phi", [math.pi / 6, math.pi / 4, math.pi / 3])
    def test_identity_large_color(self, m, p, k, phi):
        """Test the integral representation at larger k"""
        check = verify_lemma2(TorusKnot(m=m, p=p), k, ContourSpec(phi=phi))

        assert check.rel_diff <= 1e-7

    @pytest.mark.slow
    def test_identity_grid_runtime(self):
        """Test that the full k and angle grid for both knots finishes within a minute"""
        start = time.perf_counter()
        worst = 0.0
        for knot in (TREFOIL, TorusKnot(m=3, p=4)):
            for k in (5, 21, 51):
                for phi in (math.pi / 6, math.pi / 4, math.pi / 3):
                    worst = max(worst, verify_lemma2(knot, k, ContourSpec(phi=phi)).rel_diff)
        elapsed = time.perf_counter() - start

        assert worst <= 1e-7
        assert elapsed < 60.0

    def test_angle_range(self):
        """Test that angles outside (0, pi/2) are refused"""
        with pytest.raises(ContourConditionViolated):
            verify_lemma2(TREFOIL, 5, ContourSpec(phi=0.0))
        with pytest.raises(ContourConditionViolated):
            verify_lemma2(TREFOIL, 5, ContourSpec(phi=math.pi / 2))


class TestShift:
    """Test cases for the contour shift across the poles"""

    def test_residues_match_circle_integrals(self):
        """Test the analytic residues against trapezoid circles"""
        k = 5
        integrand = lemma2_integrand(TREFOIL, k)
        radius = min(1 / (4 * TREFOIL.mp), 1 / (math.pi * TREFOIL.mp * k))
        for j, analytic in enumerate(lemma2_residues(TREFOIL, k), start=1):
            numeric = 2j * math.pi * residue_circle(integrand, 1j * j / TREFOIL.mp, radius)
            assert abs(numeric - analytic) <= 1e-9 * max(abs(analytic), 1e-3)

    @pytest.mark.parametrize("m,p,k", [(2, 3, 5), (3, 4, 4), (2, 5, 7)])
    def test_shift_identity(self, m, p, k):
        """Test direct = shifted + 2 pi i sum of residues"""
        check = verify_shift(TorusKnot(m=m, p=p), k)

        assert check.rel_diff <= 1e-7

    def test_shifted_integral_matches_check(self):
        """Test that the standalone shifted integral is the one used in the check"""
        check = verify_shift(TREFOIL, 5)
        assert shifted_integral(TREFOIL, 5) == pytest.approx(check.shifted.to_complex(), rel=1e-12)

    @pytest.mark.slow
    def test_shift_identity_large_color(self):
        """Test the contour shift for the trefoil at k = 51"""
        check = verify_shift(TREFOIL, 51)

        assert check.rel_diff <= 1e-7

    def test_odd_monomial_vanishes(self):
        """Test that z tau(pi z) is even: an extra factor z integrates to zero"""
        k = 5
        odd = replace(
            shifted_integrand(TREFOIL, k),
            smooth=lambda z: z * z * torsion(TREFOIL, math.pi * z),
            smooth_mp=lambda z: z * z * torsion_mp(TREFOIL, mpmath.pi * z),
        )
        result, _ = integrate_gaussian(odd, ContourSpec(phi=math.pi / 4))

        assert abs(result.value.to_complex()) <= 1e-12

    def test_tail_terms_approximate_shifted_integral(self):
        """Test that the tail terms reproduce the shifted integral with error O(k^-2)"""
        ks = [51, 101, 201]
        diffs = []
        for k in ks:
            integral = 0.5 * lemma2_scale(TREFOIL, k) * prefactor(TREFOIL, k) * shifted_integral(TREFOIL, k)
            tails = sum(tail_term(TREFOIL, k, n) for n in (1, 2))
            diffs.append(abs(integral - tails) / abs(integral))
        slope, _ = np.polyfit(np.log(ks), np.log(diffs), 1)

        assert diffs[0] > diffs[1] > diffs[2]
        assert slope == pytest.approx(-2.0, abs=0.4)
        assert diffs[-1] < 5e-3


class TestResidueCircle:
    """Test cases for trapezoid residues"""

    def test_simple_pole(self):
        """Test the residue of 1/z"""
        assert residue_circle(lambda z: 1 / z, 0, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_torsion_pole(self):
        """Test the residue of tau(pi z) at i/6 for the trefoil"""
        value = residue_circle(lambda z: torsion(TREFOIL, math.pi * z), 1j / 6, 1 / 24)
        assert value == pytest.approx(pole_residue(TREFOIL, 1), rel=1e-12)

    def test_geometric_convergence(self):
        """Test that the node-doubling error falls geometrically"""
        f = lambda z: 1 / z + 1 / (z - 0.5)
        errors = [abs(_trapezoid_circle(f, 0, 0.25, n) - 1) for n in (8, 16, 32)]

        assert errors[1] < 1e-2 * errors[0]
        assert errors[2] < 1e-4 * errors[1]
        assert residue_circle(f, 0, 0.25) == pytest.approx(1.0, abs=1e-13)

    def test_no_convergence(self):
        """Test that a pole next to the circle exhausts the nodes"""
        with pytest.raises(NoConvergence):
            residue_circle(lambda z: 1 / (z - 0.2499), 0, 0.25, max_nodes=64)

    def test_invalid_radius(self):
        """Test that a nonpositive radius is refused"""
        with pytest.raises(InvalidParameter):
            residue_circle(lambda z: 1 / z, 0, 0.0)
