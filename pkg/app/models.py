# app/models.py
import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class TorusKnot(BaseModel):
    """The torus knot O_{m,p}; m and p are coprime positive integers."""
    model_config = ConfigDict(frozen=True)

    m: int
    p: int

    @model_validator(mode="after")
    def _coprime_positive(self) -> "TorusKnot":
        if self.m < 1 or self.p < 1:
            raise ValueError(f"m,p must be positive (got m={self.m}, p={self.p})")
        if math.gcd(self.m, self.p) != 1:
            raise ValueError(f"m,p must be coprime (got m={self.m}, p={self.p})")
        return self

    @property
    def mp(self) -> int:
        return self.m * self.p

    @property
    def is_unknot(self) -> bool:
        return self.m == 1 or self.p == 1

    def swapped(self) -> "TorusKnot":
        return TorusKnot(m=self.p, p=self.m)


class ComplexValue(BaseModel):
    """Finite complex number carried as separate real and imaginary parts."""
    model_config = ConfigDict(frozen=True)

    re: float
    im: float

    @field_validator("re", "im")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("complex components must be finite")
        return v

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexValue":
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    @property
    def abs(self) -> float:
        return math.hypot(self.re, self.im)


class PoleDatum(BaseModel):
    j: int
    location: ComplexValue
    residue: ComplexValue


class ContourSpec(BaseModel):
    """
    Rotated line C_phi = {x e^{i phi}} truncated to |x| <= truncation.

    ``panels`` is the initial number of equal panels, ``max_panels`` the
    refinement budget. A missing truncation is chosen from the integrand's
    Gaussian decay.
    """
    phi: float = 0.0
    truncation: Optional[float] = Field(default=None, gt=0)
    panels: int = Field(default=16, ge=1)
    max_panels: int = Field(default=20000, ge=1)
    tol: float = Field(default=1e-12, gt=0, lt=1)

    @model_validator(mode="after")
    def _budget(self) -> "ContourSpec":
        if self.max_panels < self.panels:
            raise ValueError("max_panels must be at least panels")
        return self


class QuadratureResult(BaseModel):
    value: ComplexValue
    error: float
    panels: int
    evaluations: int
    precision: int = 53


class LimitEstimate(BaseModel):
    value: ComplexValue
    error: float
    real_direction: ComplexValue
    imaginary_direction: ComplexValue


class IdentityCheck(BaseModel):
    lhs: ComplexValue
    rhs: ComplexValue
    rel_diff: float
    phi: float
    truncation: float
    panels: int
    precision: int
    error: float


class ShiftCheck(BaseModel):
    direct: ComplexValue
    shifted: ComplexValue
    residue_sum: ComplexValue
    rel_diff: float
    phi: float
    truncation: float
    panels: int
    precision: int


class ExpansionTerm(BaseModel):
    index: int
    value: ComplexValue


class OptimalTruncation(BaseModel):
    n: int
    magnitude: float
    within_search: bool   # False when |T_n| was still decreasing at the search limit


class ExpansionReport(BaseModel):
    knot: TorusKnot
    k: int
    n_max: int
    exact: ComplexValue
    prefactor: ComplexValue
    residue_terms: List[ExpansionTerm]
    tail_terms: List[ExpansionTerm]
    reconstructed: ComplexValue
    abs_error: float
    rel_error: float
    optimal_truncation: OptimalTruncation


class VolumeRow(BaseModel):
    k: int
    abs: float = Field(gt=0)
    log_abs_over_k: float


class VolumeScan(BaseModel):
    knot: TorusKnot
    rows: List[VolumeRow]
    fitted_exponent: Optional[float] = None
    fitted_limit: float

    @field_validator("rows")
    @classmethod
    def _ascending(cls, rows: List[VolumeRow]) -> List[VolumeRow]:
        ks = [row.k for row in rows]
        if ks != sorted(set(ks)):
            raise ValueError("rows must be strictly ascending in k")
        return rows


Subcommand = Literal[
    "jones", "kashaev", "alexander", "torsion", "series", "expand",
    "verify-lemma1", "verify-lemma2", "verify-shift", "volume-scan",
]


class RunConfig(BaseModel):
    """Parsed command line; checked against the subcommand before computing."""
    subcommand: Subcommand
    m: int
    p: int
    k: Optional[int] = None
    kmin: Optional[int] = None
    kmax: Optional[int] = None
    kstep: int = Field(default=1, ge=1)
    h: Optional[complex] = None
    t: Optional[complex] = None
    z: Optional[complex] = None
    phi: Optional[float] = None
    n_max: int = 3
    order: Optional[int] = None
    tol: float = Field(default=1e-12, gt=0, lt=1)
    precision: int = Field(default=53, ge=53)
    format: Literal["json", "csv"] = "json"
    out: Optional[str] = None
    jobs: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _subcommand_requirements(self) -> "RunConfig":
        needs_single_k = {"expand", "verify-lemma1", "verify-lemma2", "verify-shift"}
        if self.subcommand in needs_single_k and self.k is None:
            raise ValueError(f"-k is required for {self.subcommand}")
        if self.subcommand in {"jones", "kashaev"} and self.k is None and self.kmax is None:
            raise ValueError(f"-k or --kmax is required for {self.subcommand}")
        if self.subcommand == "volume-scan" and self.kmax is None:
            raise ValueError("--kmax is required for volume-scan")
        if self.subcommand in {"jones", "verify-lemma1"} and self.h is None:
            raise ValueError(f"--h is required for {self.subcommand}")
        if self.subcommand == "alexander" and self.t is None:
            raise ValueError("--t is required for alexander")
        if self.subcommand == "torsion" and self.z is None:
            raise ValueError("--z is required for torsion")
        if self.k is not None and self.k < 1:
            raise ValueError(f"-k must be >= 1 (got {self.k})")
        if self.subcommand in {"expand", "verify-shift"} and self.k is not None and self.k < 2:
            raise ValueError(f"-k must be >= 2 for {self.subcommand} (got {self.k})")
        if self.subcommand == "expand" and not 1 <= self.n_max <= 10:
            raise ValueError(f"--n-max must be in 1..10 (got {self.n_max})")
        if self.order is not None and (self.order < 4 or self.order % 2):
            raise ValueError(f"--order must be even and >= 4 (got {self.order})")
        kmin = self.kmin if self.kmin is not None else (2 if self.subcommand == "volume-scan" else 1)
        if self.kmax is not None:
            if kmin < 1 or self.kmax < kmin:
                raise ValueError(f"--kmin/--kmax must satisfy 1 <= kmin <= kmax (got {kmin}, {self.kmax})")
            if self.subcommand == "volume-scan" and kmin < 2:
                raise ValueError(f"--kmin must be >= 2 for volume-scan (got {kmin})")
        return self

    def k_values(self) -> List[int]:
        if self.kmax is None:
            return [self.k]
        kmin = self.kmin if self.kmin is not None else (2 if self.subcommand == "volume-scan" else 1)
        return list(range(kmin, self.kmax + 1, self.kstep))
