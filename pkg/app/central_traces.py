"""
Central Traces Module

The convolution algebra spanned by the quantum traces qTr_x,

    qTr_x * qTr_y = Σ_z m(z, x⊗y) qTr_z,

its level quotient qTr_n = Σ_{|x|=n} qTr_x with the birth-death rule
qTr_1 * qTr_n = qTr_{n+1} + 2 qTr_{n-1}, the expansion of qtr_1^{*n} over
the normalised level states qtr_k, and the mass of the words excluded from
the restricted level trace qtr_n^{(p,k)}.

Only the normalisation qtr_n = qTr_n / dim_q(n) is exposed; the average
Σ_{|x|=n} qtr_x is a different state and is not used here.
"""

import logging
from collections import defaultdict
from typing import Any, Dict, Iterator, List, Mapping, Tuple

import mpmath
import pandas as pd

from .exceptions import ParameterRangeError
from .fusion import Word, format_word, tensor_decompose, words_of_length
from .models import QContext
from .parallel import map_ordered, shard_range
from .qarith import cached_q_number, qdim_level, qdim_word

logger = logging.getLogger(__name__)

# fixed shard count: summation order does not depend on the worker count
ENUMERATION_SHARDS = 16


class _FinitelySupported(Mapping):
    """Immutable coefficient map with zero coefficients dropped"""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Mapping = ()):
        self._coefficients = {k: c for k, c in dict(coefficients).items() if c != 0}

    def __getitem__(self, key):
        return self._coefficients[key]

    def __iter__(self):
        return iter(self._coefficients)

    def __len__(self) -> int:
        return len(self._coefficients)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Mapping):
            return self._coefficients == {k: c for k, c in dict(other).items() if c != 0}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coefficients.items()))

    def scaled(self, factor: Any):
        return type(self)({k: c * factor for k, c in self.items()})

    def __add__(self, other):
        out: Dict = defaultdict(int)
        for k, c in self.items():
            out[k] += c
        for k, c in other.items():
            out[k] += c
        return type(self)(out)


class CentralElement(_FinitelySupported):
    """Σ c_x qTr_x, keyed by Word"""

    def __repr__(self) -> str:
        inner = ", ".join(f"{format_word(w)}: {c}" for w, c in sorted(self.items(), key=lambda i: i[0].sort_key()))
        return f"CentralElement({{{inner}}})"

    @classmethod
    def trace(cls, x: Word, coefficient: Any = 1) -> "CentralElement":
        return cls({x: coefficient})

    @classmethod
    def level(cls, n: int, coefficient: Any = 1) -> "CentralElement":
        """qTr_n expanded over the 2^n words of length n"""
        return cls({w: coefficient for w in words_of_length(n)})


class LevelElement(_FinitelySupported):
    """Σ c_n qTr_n, keyed by level"""

    def __repr__(self) -> str:
        return f"LevelElement({dict(sorted(self.items()))})"


def convolve(a: CentralElement, b: CentralElement) -> CentralElement:
    """Bilinear extension of qTr_x * qTr_y = Σ_{w ⊂ x⊗y} qTr_w"""
    out: Dict[Word, Any] = defaultdict(int)
    for x, cx in a.items():
        for y, cy in b.items():
            product = cx * cy
            for w, m in tensor_decompose(x, y).items():
                out[w] += m * product
    return CentralElement(out)


def dimension_character(a: CentralElement, ctx: QContext) -> Any:
    """qTr_x ↦ dim_q(x), extended linearly; an algebra morphism for convolve"""
    with mpmath.workprec(ctx.precision_bits):
        return mpmath.fsum(c * qdim_word(x, ctx) for x, c in a.items())


def aggregate_levels(a: CentralElement) -> LevelElement:
    """
    Rewrite a level-constant element over qTr_n

    Raises:
        ParameterRangeError: If some level carries unequal coefficients or is only partly supported
    """
    by_level: Dict[int, set] = defaultdict(set)
    counts: Dict[int, int] = defaultdict(int)
    for x, c in a.items():
        by_level[len(x)].add(c)
        counts[len(x)] += 1
    out = {}
    for n, values in by_level.items():
        if len(values) != 1 or counts[n] != 1 << n:
            raise ParameterRangeError(f"Level {n} is not a multiple of qTr_{n}")
        out[n] = values.pop()
    return LevelElement(out)


def level_convolve_step(d: LevelElement, ctx: QContext = None) -> LevelElement:
    """Apply qTr_1 * (·): level n goes to n+1 with weight 1 and to n-1 with weight 2; level 0 only rises"""
    out: Dict[int, Any] = defaultdict(int)
    for n, c in d.items():
        out[n + 1] += c
        if n >= 1:
            out[n - 1] += 2 * c
    return LevelElement(out)


def qtr1_power_distribution(n: int, ctx: QContext) -> Dict[int, Any]:
    """
    qtr_1^{*n} = Σ_k w_{n,k} qtr_k.

    qTr_1^{*n} = Σ_k c_{n,k} qTr_k with integer c_{n,k} from the birth-death
    rule; normalising gives w_{n,k} = c_{n,k} dim_q(k) / dim_q(1)^n.
    Weights vanish unless k ≤ n and k ≡ n (mod 2), and sum to 1.
    """
    if n < 0:
        raise ParameterRangeError("n must be non-negative")
    d = LevelElement({0: 1})
    for _ in range(n):
        d = level_convolve_step(d, ctx)
    with mpmath.workprec(ctx.precision_bits):
        norm = qdim_level(1, ctx) ** n
        return {k: c * qdim_level(k, ctx) / norm for k, c in sorted(d.items())}


# Restricted level traces

def _check_window(n: int, p: int, k: int) -> None:
    if p < 1 or k < 1 or n < p + k:
        raise ParameterRangeError(f"Need p >= 1, k >= 1, n >= p + k; got n={n}, p={p}, k={k}")


def _window_mask(p: int, k: int) -> int:
    """Bits i of x ^ (x >> 1) for i = p-1 .. p+k-2: letters p .. p+k (1-based) alternate"""
    return ((1 << k) - 1) << (p - 1)


def _run_lengths(bits: int, n: int) -> Iterator[int]:
    run = 1
    for i in range(1, n):
        if ((bits >> i) ^ (bits >> (i - 1))) & 1:
            run += 1
        else:
            yield run
            run = 1
    if n:
        yield run


def _enumerate_shard(args: Tuple[int, int, int, range, Any, int]) -> Any:
    n, p, k, bits_range, q, prec = args
    mask = _window_mask(p, k)
    with mpmath.workprec(prec):
        total = mpmath.mpf(0)
        for bits in bits_range:
            if ((bits ^ (bits >> 1)) & mask) != mask:
                continue
            dim = mpmath.mpf(1)
            for run in _run_lengths(bits, n):
                dim *= cached_q_number(run + 1, q, prec)
            total += dim
        return total


def _gap_enumerate(n: int, p: int, k: int, ctx: QContext, workers: int) -> Any:
    shards = shard_range(1 << n, ENUMERATION_SHARDS)
    tasks = [(n, p, k, r, ctx.q, ctx.precision_bits) for r in shards]
    partials = map_ordered(_enumerate_shard, tasks, workers)
    with mpmath.workprec(ctx.precision_bits):
        total = mpmath.mpf(0)
        for part in partials:  # fixed shard order
            total += part
        return total


def _gap_dp(n: int, p: int, k: int, ctx: QContext) -> Any:
    """
    Run-length dynamic program over positions 1 .. n.

    State: length r of the current alternating block; weight: product of
    [L+1]_q over the blocks already closed.  A block may not close between
    positions j-1 and j for p+1 ≤ j ≤ p+k.  The factor 2 accounts for the
    choice of the first letter.
    """
    prec = ctx.precision_bits
    with mpmath.workprec(prec):
        states: Dict[int, Any] = {1: mpmath.mpf(1)}
        for j in range(2, n + 1):
            nxt: Dict[int, Any] = defaultdict(lambda: mpmath.mpf(0))
            may_break = not (p + 1 <= j <= p + k)
            for r, weight in states.items():
                nxt[r + 1] += weight
                if may_break:
                    nxt[1] += weight * cached_q_number(r + 1, ctx.q, prec)
            states = dict(nxt)
        return 2 * mpmath.fsum(weight * cached_q_number(r + 1, ctx.q, prec) for r, weight in states.items())


def restricted_trace_gap(
    n: int, p: int, k: int, ctx: QContext, method: str = "dp", workers: int = 1
) -> Any:
    """
    ‖qtr_n - qtr_n^{(p,k)}‖ = dim_q(n)^{-1} Σ dim_q(y) over the words y ∈ I_n
    whose letters p .. p+k alternate, i.e. y = y₁α^{(k+1)}y₂ with |y₁| = p-1.

    Args:
        method: ``enumerate`` sums over all 2^n words, ``dp`` runs the block DP

    Raises:
        ParameterRangeError: Unless p ≥ 1, k ≥ 1 and n ≥ p + k
    """
    _check_window(n, p, k)
    if method == "enumerate":
        excluded = _gap_enumerate(n, p, k, ctx, workers)
    elif method == "dp":
        excluded = _gap_dp(n, p, k, ctx)
    else:
        raise ParameterRangeError(f"Unknown method {method!r}")
    with mpmath.workprec(ctx.precision_bits):
        return excluded / qdim_level(n, ctx)


def gap_table(n_max: int, ctx: QContext, method: str = "dp", margin: Any = 0, workers: int = 1) -> pd.DataFrame:
    """Every admissible (n, p, k) with n ≤ n_max: columns n, p, k, gap, bound, pass"""
    rows: List[Dict[str, Any]] = []
    for n in range(2, n_max + 1):
        for p in range(1, n):
            for k in range(1, n - p + 1):
                gap = restricted_trace_gap(n, p, k, ctx, method=method, workers=workers)
                with mpmath.workprec(ctx.precision_bits):
                    bound = mpmath.mpf(2) ** -k
                    holds = gap <= bound + margin
                rows.append({"n": n, "p": p, "k": k, "gap": gap, "bound": bound, "pass": holds})
    logger.info("Gap table up to n=%d: %d cells", n_max, len(rows))
    return pd.DataFrame(rows, columns=["n", "p", "k", "gap", "bound", "pass"])
