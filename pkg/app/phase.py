# app/phase.py
"""
Exact unit-modulus phases exp(i*pi*E/(2n)) carried as an integer residue.

The exponent is reduced modulo 4n before any floating-point work, so the
angle handed to cos/sin never exceeds pi/2 regardless of how large the
unreduced exponent was.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ExactPhase:
    """exp(i*pi*E/(2n)) with 0 <= E < 4n."""
    E: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"phase modulus must be positive (got {self.n})")
        object.__setattr__(self, "E", self.E % (4 * self.n))

    @classmethod
    def of(cls, exponent: int, n: int) -> "ExactPhase":
        """Reduce an arbitrary integer exponent."""
        return cls(exponent % (4 * n), n)

    def value(self) -> complex:
        quarter, rest = divmod(self.E, self.n)
        angle = math.pi * rest / (2 * self.n)
        c, s = math.cos(angle), math.sin(angle)
        return _rotate(c, s, quarter)

    def __mul__(self, other: "ExactPhase") -> "ExactPhase":
        n = math.lcm(self.n, other.n)
        return ExactPhase.of(self.E * (n // self.n) + other.E * (n // other.n), n)

    def conjugate(self) -> "ExactPhase":
        return ExactPhase.of(-self.E, self.n)

    def __complex__(self) -> complex:
        return self.value()


def _rotate(c: float, s: float, quarter: int) -> complex:
    # multiply (c + i s) by i**quarter without rounding
    if quarter == 0:
        return complex(c, s)
    if quarter == 1:
        return complex(-s, c)
    if quarter == 2:
        return complex(-c, -s)
    return complex(s, -c)


def phases(exponents: np.ndarray, n: int) -> np.ndarray:
    """
    Vectorised ExactPhase.value over an integer exponent array.

    Args:
        exponents: Integer exponents E (any sign, any size within int64)
        n: Modulus parameter, phase is exp(i*pi*E/(2n))

    Returns:
        complex128 array of unit-modulus values
    """
    reduced = np.mod(np.asarray(exponents, dtype=np.int64), 4 * n)
    quarter, rest = np.divmod(reduced, n)
    angle = np.pi * rest.astype(np.float64) / (2 * n)
    c, s = np.cos(angle), np.sin(angle)
    re = np.select([quarter == 0, quarter == 1, quarter == 2], [c, -s, -c], s)
    im = np.select([quarter == 0, quarter == 1, quarter == 2], [s, c, -s], -c)
    return re + 1j * im
