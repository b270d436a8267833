"""
Models Module

Pydantic models shared across the toolkit. It includes models for:
- Numeric contexts (q, κ, spectral data of Q_u)
- Run configuration and context sources
- Verification reports for each lemma checker
- Cylinder measures and Monte Carlo estimates
- Sandwich certificates and disjoint-support reports

High-precision values are mpmath numbers; they serialise to JSON as strings
with 20 significant digits.
"""

import json
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional

import mpmath
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, field_validator, model_validator

from .exceptions import ContextError
from .fusion import EMPTY as EMPTY_WORD, U as U_WORD, UBAR as UBAR_WORD, Word

NSTR_PRECISION_BITS = 128


def nstr(value: Any) -> str:
    """20 significant digits, the output convention for every real; mpf values keep their own mantissa"""
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, 20)
    with mpmath.workprec(NSTR_PRECISION_BITS):
        return mpmath.nstr(mpmath.mpf(value), 20)


Real = Annotated[Any, PlainSerializer(nstr, return_type=str, when_used="json")]


class QContext(BaseModel):
    """Numeric environment: q, κ, dim_q(u), optionally ρ, at a fixed precision"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: Real
    kappa: Real
    dim_u: Real
    rho: Optional[Real] = None
    precision_bits: int = Field(default=128, ge=64)


class QSpectrum(BaseModel):
    """Eigenvalues of the normalised Woronowicz matrix Q_u"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eigenvalues: List[Real]
    N: int
    unimodular: bool = False

    @property
    def norm(self) -> Any:
        return max(self.eigenvalues)

    @property
    def inverse_norm(self) -> Any:
        return 1 / min(self.eigenvalues)


class ContextSource(BaseModel):
    """`{"q": 0.5}` or `{"F": [[[re, im], ...], ...]}`, never both"""
    q: Optional[float] = None
    F: Optional[List[List[List[float]]]] = None

    @model_validator(mode="after")
    def exactly_one_source(self):
        if (self.q is None) == (self.F is None):
            raise ContextError("Exactly one of 'q' or 'F' must be provided")
        return self

    @field_validator("F")
    def validate_entries(cls, v):
        if v is None:
            return v
        for row in v:
            if len(row) != len(v):
                raise ContextError("F must be a square matrix")
            for entry in row:
                if len(entry) != 2:
                    raise ContextError("F entries must be [re, im] pairs")
        return v

    @classmethod
    def from_json_file(cls, path: str) -> "ContextSource":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, ValueError) as e:
            raise ContextError(f"Cannot read context file {path}: {e}")
        if not isinstance(data, dict):
            raise ContextError("Context file must hold a JSON object")
        return cls(**data)


class RunConfig(BaseModel):
    """One CLI invocation, fully resolved; identical configs give identical output"""
    source: ContextSource
    precision_bits: int = Field(default=128, ge=64)
    seed: int = 7
    workers: int = Field(default=1, ge=1)
    output_format: str = "csv"
    out: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("output_format")
    def validate_format(cls, v):
        if v not in ("csv", "json"):
            raise ValueError("output format must be csv or json")
        return v


class WordBoundCheck(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    word: str
    dim_q: Real
    lower_bound: Real  # q^{-|x|}
    dim_holds: bool
    ratio: Real  # ρ^{|x|} / dim_q(x)
    ratio_bound: Real  # (qρ)^{|x|}
    ratio_holds: bool


class WoronowiczReport(BaseModel):
    """Scalar content of the Q-matrix lemma: qρ < 1 for N ≥ 3 and dim_q(x) ≥ q^{-|x|}"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    N: int
    q: Real
    rho: Real
    q_rho: Real
    strict_pass: bool
    boundary_case: bool
    unimodular: bool
    words: List[WordBoundCheck] = Field(default_factory=list)
    passed: bool


class DecayCheck(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    alpha: str
    k: int
    word: str
    mass: Real
    bound: Real
    holds: bool


class NonAtomicityReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    word: str
    mass: Real
    base: Real  # [2]_q κ / √2
    base_below_one: bool
    geometric_bound: Real
    geometric_holds: bool
    decay: List[DecayCheck] = Field(default_factory=list)
    passed: bool


class WalkConfig(BaseModel):
    """Monte Carlo exit-law run parameters"""
    seed: int = 7
    n_paths: int = Field(default=100_000, ge=1)
    escape_level: int = Field(default=60, ge=1, le=62)
    record_depth: int = Field(default=2, ge=0)
    workers: int = Field(default=1, ge=1)
    step_cap: int = Field(default=10_000_000, ge=1)

    @model_validator(mode="after")
    def escape_above_record(self):
        if self.escape_level <= self.record_depth:
            raise ValueError("escape_level must exceed record_depth")
        return self


class CylinderEstimate(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    word: str
    count: int
    estimate: float
    stderr: float
    closed_form: Optional[Real] = None  # only for walks started at ε
    z_score: Optional[float] = None


class HittingEstimate(BaseModel):
    """Empirical exit law at depth record_depth with binomial standard errors"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: WalkConfig
    start: str = "e"
    completed: int
    failures: int
    root_returns: int
    rows: List[CylinderEstimate]

    @property
    def max_abs_z(self) -> float:
        return max((abs(r.z_score) for r in self.rows if r.z_score is not None), default=0.0)


class LemmaVerdict(BaseModel):
    """Single operator-inequality check; precondition problems are listed, not raised"""
    lemma: str
    eps: float
    n: Optional[int] = None
    value: float
    bound: float
    preconditions_met: bool
    violations: List[str] = Field(default_factory=list)
    passed: bool


class SweepSummary(BaseModel):
    lemma: str
    eps: Optional[float] = None
    samples: int
    applicable: int
    counterexamples: int
    worst_slack: float  # min over samples of bound - value
    passed: bool


class ThetaProbeResult(BaseModel):
    theta: float
    k: int
    samples: int
    minimum: float
    bound: float
    passed: bool


class SandwichCertificate(BaseModel):
    """Every subobject of U⊗x⊗U, U = (uū)^N, starts with u and ends with ū"""
    F_set: List[str]
    N: int
    subobjects: Dict[str, List[str]]
    reverified: bool


class SandwichFailure(BaseModel):
    """No N up to N_max works; one offending subobject per tried N"""
    F_set: List[str]
    N_max: int
    witnesses: Dict[int, Dict[str, str]]


class SupportViolation(BaseModel):
    s: str
    x: str
    t: str  # subobject of U⊗x
    z: str  # offending summand of t⊗s
    y: str  # offending summand of U⊗s


class SupportReport(BaseModel):
    N: int
    L: int
    F_set: List[str]
    setA: List[str]
    setB: List[str]
    violations: List[SupportViolation] = Field(default_factory=list)

    @property
    def disjoint(self) -> bool:
        return not self.violations


class CheckResult(BaseModel):
    """One row of a verification report"""
    suite: str
    name: str
    passed: bool
    margin: Optional[str] = None
    detail: Dict[str, Any] = Field(default_factory=dict)
    seconds: float = 0.0


class VerificationReport(BaseModel):
    suites: List[str]
    precision_bits: int
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


class CylinderMeasure(BaseModel):
    """Masses of the cylinders ∂I(x) for every prefix x up to ``depth``"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    depth: int
    masses: Dict[Any, Real]  # Word -> mass
    precision_bits: int = Field(default=128, ge=64)

    def level_total(self, n: int) -> Any:
        with mpmath.workprec(self.precision_bits):
            return mpmath.fsum(m for x, m in self.masses.items() if len(x) == n)

    def consistency_defects(self, tolerance: Any) -> List[Word]:
        """Prefixes x with |mass(x) - mass(xu) - mass(xū)| above tolerance"""
        bad = []
        with mpmath.workprec(self.precision_bits):
            tolerance = mpmath.mpf(tolerance)
            for x, mass in self.masses.items():
                if len(x) >= self.depth:
                    continue
                children = self.masses.get(x + U_WORD), self.masses.get(x + UBAR_WORD)
                if None in children:
                    continue
                if abs(mass - mpmath.fsum(children)) > tolerance:
                    bad.append(x)
        return bad

    def is_consistent(self, tolerance: Any) -> bool:
        with mpmath.workprec(self.precision_bits):
            root_ok = abs(self.masses.get(EMPTY_WORD, 0) - 1) <= mpmath.mpf(tolerance)
        return root_ok and not self.consistency_defects(tolerance)


class WitnessNorm(BaseModel):
    """Support-level value of ‖(p⊗b)(α⊗id)(b)‖: 0 when the supports are disjoint, else 1"""
    value: float
    report: Optional[SupportReport] = None


class VerifyRequest(BaseModel):
    """Body of POST /verify"""
    source: ContextSource = Field(default_factory=lambda: ContextSource(q=1.0))
    suites: List[str] = Field(default_factory=lambda: ["fusion"])
    precision_bits: Optional[int] = Field(default=None, ge=64)
    seed: Optional[int] = None
    params: Dict[str, Any] = Field(default_factory=dict)
