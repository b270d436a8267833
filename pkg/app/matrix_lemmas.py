"""
Matrix Lemmas Module

Finite-dimensional checkers for two operator inequalities on positive
contractions and for the rotation estimate ‖b(α⊗id)(b)‖ ≥ 1 - |1 - e^{iθ}|.

- Asymptotic orthogonality: 0 ≤ A, B ≤ 1 and ‖A+B‖ ≤ 1+ε give
  ‖AⁿBⁿ‖ ≤ 14ε for n = ⌈log ε² / log(1-ε²)⌉, 0 < ε ≤ ½.
- Easy orthogonality: ‖A‖ = ‖B‖ = 1 and ‖AB‖ ≤ ε give ‖A+B‖ ≤ 1+2ε.

Everything runs in double precision with an absolute margin (default 1e-9).
Unmet preconditions are listed in the verdict, never raised.  Randomised
sweeps draw sample i from SeedSequence([seed, tag, i]), so they are
reproducible and independent of the worker count.
"""

import logging
import math
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .exceptions import ParameterRangeError
from .models import LemmaVerdict, SweepSummary, ThetaProbeResult
from .parallel import map_ordered, shard_range

logger = logging.getLogger(__name__)

MATRIX_MARGIN = 1e-9
MAX_DIMENSION = 64
SWEEP_SHARDS = 16


class PsdPair(BaseModel):
    """Two Hermitian matrices of equal size d ≤ 64"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    A: np.ndarray
    B: np.ndarray

    @model_validator(mode="after")
    def validate_shapes(self):
        for name, m in (("A", self.A), ("B", self.B)):
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ParameterRangeError(f"{name} must be a square matrix")
            if m.shape[0] > MAX_DIMENSION:
                raise ParameterRangeError(f"{name} exceeds dimension {MAX_DIMENSION}")
            if not np.allclose(m, m.conj().T, atol=1e-12):
                raise ParameterRangeError(f"{name} must be Hermitian")
        if self.A.shape != self.B.shape:
            raise ParameterRangeError("A and B must have the same size")
        return self

    @classmethod
    def of(cls, A: Any, B: Any) -> "PsdPair":
        return cls(A=np.asarray(A, dtype=np.complex128), B=np.asarray(B, dtype=np.complex128))


def operator_norm(X: np.ndarray) -> float:
    """Largest singular value"""
    return float(np.linalg.norm(X, 2))


def norm_self_consistency(X: np.ndarray, tol: float = 1e-10) -> bool:
    """‖X‖² = ‖X*X‖ up to a relative tolerance"""
    n2 = operator_norm(X) ** 2
    return abs(n2 - operator_norm(X.conj().T @ X)) <= tol * max(1.0, n2)


def psd_power(A: np.ndarray, n: int) -> np.ndarray:
    """Aⁿ through the spectral decomposition; round-off negatives clipped to 0"""
    w, V = np.linalg.eigh(A)
    w = np.clip(w, 0.0, None) ** n
    return (V * w) @ V.conj().T


def random_psd(d: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """G G* / ‖G G*‖ with complex Gaussian G of shape d × rank"""
    r = rank or d
    G = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    P = G @ G.conj().T
    return P / operator_norm(P)


def shrink_to_constraint(A: np.ndarray, B: np.ndarray, eps: float, iterations: int = 60) -> np.ndarray:
    """Largest tB, t ∈ [0, 1], with ‖A + tB‖ ≤ 1 + eps, by bisection on t"""
    if operator_norm(A + B) <= 1 + eps:
        return B
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if operator_norm(A + mid * B) <= 1 + eps:
            lo = mid
        else:
            hi = mid
    return lo * B


def iterations_for(eps: float) -> int:
    """Smallest n with (1-ε²)ⁿ ≤ ε²"""
    return math.ceil(math.log(eps * eps) / math.log(1 - eps * eps))


def _min_eigenvalue(X: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(X)[0])


def asymptotic_orthogonality_check(pair: PsdPair, eps: float, margin: float = MATRIX_MARGIN) -> LemmaVerdict:
    """‖AⁿBⁿ‖ against 14ε"""
    violations: List[str] = []
    if not 0 < eps <= 0.5:
        raise ParameterRangeError(f"eps must lie in (0, 1/2], got {eps}")
    A, B = pair.A, pair.B
    for name, m in (("A", A), ("B", B)):
        if _min_eigenvalue(m) < -margin:
            violations.append(f"{name} is not positive")
        if operator_norm(m) > 1 + margin:
            violations.append(f"||{name}|| > 1")
    if operator_norm(A + B) > 1 + eps + margin:
        violations.append("||A+B|| > 1+eps")

    n = iterations_for(eps)
    value = operator_norm(psd_power(A, n) @ psd_power(B, n))
    bound = 14 * eps
    preconditions_met = not violations
    return LemmaVerdict(
        lemma="asymptotic_orthogonality", eps=eps, n=n, value=value, bound=bound,
        preconditions_met=preconditions_met, violations=violations,
        passed=preconditions_met and value <= bound + margin,
    )


def easy_orthogonality_check(pair: PsdPair, eps: float, margin: float = MATRIX_MARGIN) -> LemmaVerdict:
    """‖A+B‖ against 1+2ε"""
    if eps < 0:
        raise ParameterRangeError(f"eps must be non-negative, got {eps}")
    violations: List[str] = []
    A, B = pair.A, pair.B
    for name, m in (("A", A), ("B", B)):
        if _min_eigenvalue(m) < -margin:
            violations.append(f"{name} is not positive")
        if abs(operator_norm(m) - 1) > margin:
            violations.append(f"||{name}|| != 1")
    if operator_norm(A @ B) > eps + margin:
        violations.append("||AB|| > eps")

    value = operator_norm(A + B)
    bound = 1 + 2 * eps
    preconditions_met = not violations
    return LemmaVerdict(
        lemma="easy_orthogonality", eps=eps, value=value, bound=bound,
        preconditions_met=preconditions_met, violations=violations,
        passed=preconditions_met and value <= bound + margin,
    )


# Randomised sweeps

def _sample_rng(seed: int, tag: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, tag, i]))


def _random_pair(rng: np.random.Generator, dim_max: int) -> Tuple[np.ndarray, np.ndarray]:
    d = int(rng.integers(2, dim_max + 1))
    rank_a = int(rng.integers(1, d + 1))
    rank_b = int(rng.integers(1, d + 1))
    return random_psd(d, rng, rank_a), random_psd(d, rng, rank_b)


def _asymptotic_shard(args: Tuple[range, int, float, int, float]) -> List[Tuple[bool, bool, float]]:
    indices, seed, eps, dim_max, margin = args
    tag = int(round(eps * 1e6))
    out = []
    for i in indices:
        rng = _sample_rng(seed, tag, i)
        A, B = _random_pair(rng, dim_max)
        B = shrink_to_constraint(A, B, eps)
        verdict = asymptotic_orthogonality_check(PsdPair.of(A, B), eps, margin)
        out.append((verdict.preconditions_met, verdict.passed, verdict.bound - verdict.value))
    return out


def _easy_shard(args: Tuple[range, int, float, int, float]) -> List[Tuple[bool, bool, float]]:
    indices, seed, _, dim_max, margin = args
    out = []
    for i in indices:
        rng = _sample_rng(seed, 0, i)
        A, B = _random_pair(rng, dim_max)
        eps = operator_norm(A @ B)
        verdict = easy_orthogonality_check(PsdPair.of(A, B), eps, margin)
        out.append((verdict.preconditions_met, verdict.passed, verdict.bound - verdict.value))
    return out


def _summarise(lemma: str, eps: Optional[float], results: Sequence[Tuple[bool, bool, float]]) -> SweepSummary:
    applicable = [r for r in results if r[0]]
    counterexamples = sum(1 for r in applicable if not r[1])
    worst = min((r[2] for r in applicable), default=float("inf"))
    if counterexamples:
        logger.error("%s: %d counterexamples (eps=%s)", lemma, counterexamples, eps)
    return SweepSummary(
        lemma=lemma, eps=eps, samples=len(results), applicable=len(applicable),
        counterexamples=counterexamples, worst_slack=worst, passed=counterexamples == 0,
    )


def _run_sweep(shard_fn, samples: int, seed: int, eps: float, dim_max: int, margin: float, workers: int):
    if dim_max < 2 or dim_max > MAX_DIMENSION:
        raise ParameterRangeError(f"dim_max must lie in [2, {MAX_DIMENSION}]")
    tasks = [(r, seed, eps, dim_max, margin) for r in shard_range(samples, SWEEP_SHARDS)]
    return [row for part in map_ordered(shard_fn, tasks, workers) for row in part]


def asymptotic_orthogonality_sweep(
    eps: float, samples: int, seed: int, dim_max: int = 6, margin: float = MATRIX_MARGIN, workers: int = 1
) -> SweepSummary:
    """Random pairs with B shrunk onto ‖A+B‖ ≤ 1+ε; any failing applicable sample is a counterexample"""
    results = _run_sweep(_asymptotic_shard, samples, seed, eps, dim_max, margin, workers)
    return _summarise("asymptotic_orthogonality", eps, results)


def easy_orthogonality_sweep(
    samples: int, seed: int, dim_max: int = 6, margin: float = MATRIX_MARGIN, workers: int = 1
) -> SweepSummary:
    """Random normalised pairs, each checked at ε = ‖AB‖"""
    results = _run_sweep(_easy_shard, samples, seed, 0.0, dim_max, margin, workers)
    return _summarise("easy_orthogonality", None, results)


# Rotation probe

def rotation_action(b: np.ndarray, theta: float, k: int) -> np.ndarray:
    """(α⊗id)(b) for α = Ad(diag(1, e^{iθ})) on M₂, b ∈ M₂⊗M_k"""
    D = np.kron(np.diag([1.0, np.exp(1j * theta)]), np.eye(k))
    return D @ b @ D.conj().T


def rotation_bound(theta: float) -> float:
    return 1 - abs(1 - np.exp(1j * theta))


def _probe_value(G: np.ndarray, theta: float, k: int) -> float:
    b = G @ G.conj().T
    b = b / operator_norm(b)
    return operator_norm(b @ rotation_action(b, theta, k))


def _theta_shard(args: Tuple[range, int, float, int, int]) -> float:
    indices, seed, theta, k, refine_steps = args
    d = 2 * k
    best = float("inf")
    for i in indices:
        rng = _sample_rng(seed, 1, i)
        rank = 1 if i % 2 else int(rng.integers(1, d + 1))
        G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
        value = _probe_value(G, theta, k)
        # local search around the sample
        for _ in range(refine_steps):
            trial = G + 0.1 * (rng.standard_normal(G.shape) + 1j * rng.standard_normal(G.shape))
            trial_value = _probe_value(trial, theta, k)
            if trial_value < value:
                G, value = trial, trial_value
        best = min(best, value)
    return best


def theta_rotation_probe(
    theta: float, k: int, n_samples: int, seed: int,
    refine_steps: int = 20, margin: float = MATRIX_MARGIN, workers: int = 1,
) -> ThetaProbeResult:
    """
    Minimum of ‖b(α⊗id)(b)‖ over random positive norm-one b ∈ M₂⊗M_k.

    Odd samples are rank one, even samples have random rank; each is then
    pushed downhill by refine_steps random perturbations.
    """
    if k < 1 or n_samples < 1:
        raise ParameterRangeError("k and n_samples must be positive")
    tasks = [(r, seed, theta, k, refine_steps) for r in shard_range(n_samples, SWEEP_SHARDS)]
    minimum = min(map_ordered(_theta_shard, tasks, workers))
    bound = rotation_bound(theta)
    return ThetaProbeResult(
        theta=theta, k=k, samples=n_samples, minimum=minimum, bound=bound,
        passed=minimum >= bound - margin,
    )
