"""
Q-Arithmetic Module

q-numbers, the parameter κ, quantum dimensions, and the spectral data of the
Woronowicz matrix Q_u derived from a parameter matrix F.

All arithmetic is radix-2 arbitrary precision (mpmath) at the context's
``precision_bits``.  Inequality verdicts take an explicit margin: a strict
inequality a < b "holds" when a ≤ b - margin, and "is a boundary case" when
|a - b| ≤ margin.
"""

import logging
from functools import lru_cache
from typing import Any, Iterable, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .exceptions import ContextError, ParameterRangeError
from .fusion import Word, block_decomposition, format_word
from .models import QContext, QSpectrum, WordBoundCheck, WoronowiczReport

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 128
DEFAULT_MARGIN = mpmath.mpf("1e-25")


@lru_cache(maxsize=65536)
def cached_q_number(n: int, t: Any, prec: int) -> Any:
    with mpmath.workprec(prec):
        if t == 1:
            return mpmath.mpf(n)
        return (t ** -n - t ** n) / (1 / t - t)


def q_number(n: int, t: Any, precision_bits: Optional[int] = None) -> Any:
    """
    [n]_t = (t^{-n} - t^n) / (t^{-1} - t), with the limit value n at t = 1

    Args:
        n: Non-negative integer
        t: Parameter in (0, 1]
        precision_bits: Working precision; defaults to the current mpmath precision
    """
    prec = precision_bits or mpmath.mp.prec
    with mpmath.workprec(prec):
        t = mpmath.mpf(t)
        if not 0 < t <= 1:
            raise ParameterRangeError(f"q-number parameter must lie in (0, 1], got {t}")
        return cached_q_number(n, t, prec)


def kappa_from_dim(dim_u: Any) -> Any:
    """Root in (0,1) of κ² - √2·dim_u·κ + 1 = 0, in the cancellation-free form"""
    s = mpmath.sqrt(2) * dim_u
    return 2 / (s + mpmath.sqrt(s * s - 4))


def q_from_dim(dim_u: Any) -> Any:
    """Root in (0,1] of q + 1/q = dim_u; dim_u is clamped to 2 against rounding"""
    dim_u = max(dim_u, mpmath.mpf(2))
    return 2 / (dim_u + mpmath.sqrt(dim_u * dim_u - 4))


def context_from_q(q: Any, precision_bits: int = DEFAULT_PRECISION) -> QContext:
    """
    Build the numeric context from q alone (ρ stays unset)

    Raises:
        ContextError: If q is outside (0, 1]
    """
    with mpmath.workprec(precision_bits):
        q = mpmath.mpf(q)
        if not 0 < q <= 1:
            raise ContextError(f"q must lie in (0, 1], got {mpmath.nstr(q, 10)}")
        dim_u = q + 1 / q
        ctx = QContext(q=q, kappa=kappa_from_dim(dim_u), dim_u=dim_u, precision_bits=precision_bits)
    logger.debug("Context from q=%s: kappa=%s", mpmath.nstr(ctx.q, 12), mpmath.nstr(ctx.kappa, 12))
    return ctx


def _to_mp_matrix(F: Any) -> mpmath.matrix:
    """Accept a numpy array, nested complex lists, or the JSON [re, im] layout"""
    if isinstance(F, np.ndarray):
        rows = F.tolist()
    else:
        rows = F
    entries = []
    for row in rows:
        out_row = []
        for entry in row:
            if isinstance(entry, (list, tuple)):
                out_row.append(mpmath.mpc(entry[0], entry[1]))
            else:
                out_row.append(mpmath.mpc(entry))
        entries.append(out_row)
    return mpmath.matrix(entries)


def context_from_F(F: Any, precision_bits: int = DEFAULT_PRECISION) -> Tuple[QContext, QSpectrum]:
    """
    Derive Q_u, q and ρ from the parameter matrix F.

    Q_u = c·F*F with c = sqrt(Tr((F*F)^{-1}) / Tr(F*F)), the unique positive
    scalar making Tr(Q_u) = Tr(Q_u^{-1}); then dim_q(u) = Tr(Q_u) and
    ρ = max(‖Q_u‖, ‖Q_u^{-1}‖).

    Raises:
        ContextError: If F is not square, smaller than 2x2, or singular
    """
    with mpmath.workprec(precision_bits):
        M = _to_mp_matrix(F)
        if M.rows != M.cols:
            raise ContextError("F must be square")
        N = M.rows
        if N < 2:
            raise ContextError("F must be at least 2x2 (dim_q(u) >= 2)")

        gram = M.H * M
        E = mpmath.eigh(gram, eigvals_only=True)
        eigenvalues = [mpmath.re(E[i]) for i in range(E.rows)]
        scale = max(abs(ev) for ev in eigenvalues)
        if scale == 0 or min(eigenvalues) <= scale * mpmath.mpf(2) ** (-precision_bits // 2):
            raise ContextError("F is singular")

        c = mpmath.sqrt(sum(1 / ev for ev in eigenvalues) / sum(eigenvalues))
        spectrum = sorted(c * ev for ev in eigenvalues)
        dim_u = sum(spectrum)
        q = q_from_dim(dim_u)
        rho = max(spectrum[-1], 1 / spectrum[0])
        tol = mpmath.mpf(2) ** (-precision_bits // 2)
        unimodular = all(abs(ev - 1) <= tol for ev in spectrum)

        ctx = QContext(
            q=q, kappa=kappa_from_dim(q + 1 / q), dim_u=q + 1 / q, rho=rho,
            precision_bits=precision_bits,
        )
    logger.info(
        "Context from F (N=%d): q=%s rho=%s unimodular=%s",
        N, mpmath.nstr(q, 12), mpmath.nstr(rho, 12), unimodular,
    )
    return ctx, QSpectrum(eigenvalues=spectrum, N=N, unimodular=unimodular)


def qdim_blocks(run_lengths: Iterable[int], ctx: QContext) -> Any:
    """Product of [k+1]_q over the given block lengths"""
    prec = ctx.precision_bits
    with mpmath.workprec(prec):
        result = mpmath.mpf(1)
        for k in run_lengths:
            result *= cached_q_number(k + 1, ctx.q, prec)
        return result


def qdim_word(x: Word, ctx: QContext) -> Any:
    """dim_q(x) = [|x_1|+1]_q ⋯ [|x_p|+1]_q over the alternating blocks of x"""
    return qdim_blocks((k for _, k in block_decomposition(x)), ctx)


def qdim_level(n: int, ctx: QContext) -> Any:
    """dim_q(n) = Σ_{|x|=n} dim_q(x) = √2^n [n+1]_κ"""
    prec = ctx.precision_bits
    with mpmath.workprec(prec):
        return mpmath.sqrt(2) ** n * cached_q_number(n + 1, ctx.kappa, prec)


def level_ratio(n: int, m: int, ctx: QContext) -> Any:
    """dim_q(n) / dim_q(m) without forming either (both grow like (√2/κ)^n)"""
    prec = ctx.precision_bits
    with mpmath.workprec(prec):
        return mpmath.sqrt(2) ** (n - m) * cached_q_number(n + 1, ctx.kappa, prec) / cached_q_number(m + 1, ctx.kappa, prec)


def within(lhs: Any, rhs: Any, margin: Any) -> bool:
    """lhs ≤ rhs up to a relative margin"""
    return lhs <= rhs + margin * max(1, abs(rhs))


def verify_woronowicz_bounds(
    ctx: QContext,
    spectrum: QSpectrum,
    sample_words: Iterable[Word] = (),
    margin: Any = DEFAULT_MARGIN,
) -> WoronowiczReport:
    """
    Check qρ < 1 and, per sampled word, dim_q(x) ≥ q^{-|x|} and ρ^{|x|}/dim_q(x) ≤ (qρ)^{|x|}.

    N = 2 gives qρ = 1 exactly (the boundary case); it is flagged rather than failed.
    """
    with mpmath.workprec(ctx.precision_bits):
        margin = mpmath.mpf(margin)
        rho = ctx.rho if ctx.rho is not None else max(spectrum.norm, spectrum.inverse_norm)
        q_rho = ctx.q * rho
        strict_pass = q_rho <= 1 - margin
        boundary_case = abs(q_rho - 1) <= margin

        checks = []
        for x in sample_words:
            n = len(x)
            dim = qdim_word(x, ctx)
            lower = ctx.q ** -n
            ratio = rho ** n / dim
            ratio_bound = q_rho ** n
            checks.append(WordBoundCheck(
                word=format_word(x),
                dim_q=dim,
                lower_bound=lower,
                dim_holds=within(lower, dim, margin),
                ratio=ratio,
                ratio_bound=ratio_bound,
                ratio_holds=within(ratio, ratio_bound, margin),
            ))

    words_ok = all(c.dim_holds and c.ratio_holds for c in checks)
    expected_strict = spectrum.N >= 3
    passed = words_ok and (strict_pass if expected_strict else (strict_pass or boundary_case))
    if spectrum.N == 2 and boundary_case:
        logger.info("N=2 boundary case: q*rho = 1 within margin")
    return WoronowiczReport(
        N=spectrum.N, q=ctx.q, rho=rho, q_rho=q_rho,
        strict_pass=strict_pass, boundary_case=boundary_case,
        unimodular=spectrum.unimodular, words=checks, passed=passed,
    )


def random_parameter_matrix(N: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian F; almost surely invertible and non-unimodular"""
    return rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))


def sample_words(count: int, max_length: int, rng: np.random.Generator) -> Sequence[Word]:
    lengths = rng.integers(0, max_length + 1, size=count)
    return [Word(int(n), int(rng.integers(0, 1 << int(n)))) if n else Word(0) for n in lengths]
