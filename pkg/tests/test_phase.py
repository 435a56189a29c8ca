"""
Unit tests for exact phases and deterministic summation
"""

import cmath
import math

import numpy as np
import pytest
from app.phase import ExactPhase, phases
from app.utils.summation import pairwise_sum


class TestExactPhase:
    """Test cases for ExactPhase"""

    def test_reduction(self):
        """Test that exponents are reduced modulo 4n"""
        assert ExactPhase.of(4 * 7 * 1000 + 3, 7) == ExactPhase(3, 7)
        assert ExactPhase.of(-1, 7).E == 27

    def test_quarter_turns_are_exact(self):
        """Test that multiples of pi/2 carry no rounding"""
        assert ExactPhase.of(1, 1).value() == 1j
        assert ExactPhase.of(2, 1).value() == -1
        assert ExactPhase.of(3, 1).value() == -1j
        assert ExactPhase.of(10 ** 18, 1).value() == 1

    def test_matches_exponential(self):
        """Test agreement with exp(i pi E/(2n)) for small exponents"""
        for E in range(-40, 40):
            expected = cmath.exp(1j * math.pi * E / 22)
            assert abs(ExactPhase.of(E, 11).value() - expected) < 1e-15

    def test_huge_exponent_stays_accurate(self):
        """Test that a huge exponent gives the same value as its residue"""
        n = 12345
        E = 987654321987654321
        assert ExactPhase.of(E, n).value() == ExactPhase(E % (4 * n), n).value()

    def test_product_and_conjugate(self):
        """Test multiplication across moduli and conjugation"""
        a, b = ExactPhase.of(3, 4), ExactPhase.of(5, 6)
        assert abs((a * b).value() - a.value() * b.value()) < 1e-15
        assert abs((a * a.conjugate()).value() - 1) < 1e-15

    def test_invalid_modulus(self):
        """Test that a nonpositive modulus is rejected"""
        with pytest.raises(ValueError):
            ExactPhase(1, 0)

    def test_vectorised_matches_scalar(self):
        """Test that phases() reproduces ExactPhase.value"""
        exponents = np.arange(-500, 500, 7, dtype=np.int64)
        vector = phases(exponents, 13)
        scalar = np.array([ExactPhase.of(int(e), 13).value() for e in exponents])
        assert np.allclose(vector, scalar, rtol=0, atol=1e-15)


class TestPairwiseSum:
    """Test cases for pairwise_sum"""

    def test_empty_and_single(self):
        """Test degenerate inputs"""
        assert pairwise_sum([]) == 0j
        assert pairwise_sum([2 + 1j]) == 2 + 1j

    def test_independent_of_jobs(self):
        """Test bit-identical results for any worker count"""
        rng = np.random.default_rng(7)
        values = rng.normal(size=1001) + 1j * rng.normal(size=1001)
        serial = pairwise_sum(values)
        for jobs in (2, 3, 4, 8, 64):
            assert pairwise_sum(values, jobs) == serial

    def test_accuracy(self):
        """Test agreement with math.fsum"""
        rng = np.random.default_rng(11)
        values = rng.normal(size=4096) * 1e6
        assert abs(pairwise_sum(values).real - math.fsum(values)) < 1e-6
