"""
Boundary Measure Module

The harmonic measure ω_I on the boundary ∂I of the tree of words, evaluated
on cylinders ∂I(x) = {infinite words with prefix x}:

    ω_I(∂I(x)) = dim_q(x) (κ/√2)^{|x|} (1 - (κ/√2) [l]_q / [l+1]_q)

where l is the length of the final alternating block of x.  The same value
is the limit of dim_q(x, n) / dim_q(n), dim_q(x, n) being the total quantum
dimension of the words of length n extending x.
"""

import logging
from typing import Any, Dict, List

import mpmath
import pandas as pd

from .exceptions import ParameterRangeError
from .fusion import EMPTY, U, UBAR, Letter, Word, alternating_word, block_decomposition, format_word, words_of_length
from .models import CylinderMeasure, DecayCheck, NonAtomicityReport, QContext
from .parallel import map_ordered
from .qarith import DEFAULT_MARGIN, cached_q_number, level_ratio, qdim_level, qdim_word, within

logger = logging.getLogger(__name__)

MAX_CYLINDER_DEPTH = 14


def harmonic_cylinder_mass(x: Word, ctx: QContext) -> Any:
    """
    Closed-form ω_I(∂I(x)); the empty word gets the full mass 1.

    The final block length l is read from the block decomposition; when x is a
    single block the prefix x' is empty and the formula needs no change.
    """
    if not x:
        return mpmath.mpf(1)
    prec = ctx.precision_bits
    with mpmath.workprec(prec):
        l = block_decomposition(x)[-1][1]
        c = ctx.kappa / mpmath.sqrt(2)
        return qdim_word(x, ctx) * c ** len(x) * (1 - c * cached_q_number(l, ctx.q, prec) / cached_q_number(l + 1, ctx.q, prec))


def geometric_base(ctx: QContext) -> Any:
    """[2]_q κ / √2, the per-letter decay rate of cylinder masses; always < 1"""
    with mpmath.workprec(ctx.precision_bits):
        return ctx.dim_u * ctx.kappa / mpmath.sqrt(2)


def dimq_ratio_limit(x: Word, n_max: int, ctx: QContext) -> Any:
    """
    dim_q(x, n_max) / dim_q(n_max) via the level recursion.

    d(n) = dim_q(x, n) obeys d(n+1) = 2[2]_q d(n) - 2 d(n-1) for n ≥ |x|+1,
    seeded with d(|x|) = dim_q(x), d(|x|+1) = dim_q(xu) + dim_q(xū).  The
    iteration runs on r(n) = d(n) / dim_q(n), with the level ratios taken
    from the closed form, so nothing grows like (√2/κ)^n.

    Raises:
        ParameterRangeError: If n_max < |x| + 2
    """
    m = len(x)
    if n_max < m + 2:
        raise ParameterRangeError(f"n_max must be at least |x|+2 = {m + 2}")
    if not x:
        return mpmath.mpf(1)
    with mpmath.workprec(ctx.precision_bits):
        two_dim = 2 * ctx.dim_u
        r_prev = qdim_word(x, ctx) / qdim_level(m, ctx)
        r = (qdim_word(x + U, ctx) + qdim_word(x + UBAR, ctx)) / qdim_level(m + 1, ctx)
        for n in range(m + 1, n_max):
            # r(n+1) = [2[2] r(n) D(n) - 2 r(n-1) D(n-1)] / D(n+1)
            r_prev, r = r, two_dim * r * level_ratio(n, n + 1, ctx) - 2 * r_prev * level_ratio(n - 1, n + 1, ctx)
        return r


def dimq_cylinder_level(x: Word, n: int, ctx: QContext) -> Any:
    """dim_q(x, n) by direct enumeration of the 2^{n-|x|} extensions of x"""
    if n < len(x):
        raise ParameterRangeError("n must be at least |x|")
    with mpmath.workprec(ctx.precision_bits):
        return mpmath.fsum(qdim_word(x + s, ctx) for s in words_of_length(n - len(x)))


def _masses_for_level(args) -> List[Any]:
    n, ctx = args
    return [harmonic_cylinder_mass(x, ctx) for x in words_of_length(n)]


def build_cylinder_measure(
    depth: int, ctx: QContext, max_depth: int = MAX_CYLINDER_DEPTH, workers: int = 1
) -> CylinderMeasure:
    """
    Populate ω_I(∂I(x)) for every |x| ≤ depth.

    Raises:
        ParameterRangeError: If depth exceeds max_depth (2^depth cylinders per level)
    """
    if depth < 0 or depth > max_depth:
        raise ParameterRangeError(f"Cylinder depth must lie in [0, {max_depth}], got {depth}")
    per_level = map_ordered(_masses_for_level, [(n, ctx) for n in range(depth + 1)], workers)
    masses: Dict[Word, Any] = {}
    for n, level_masses in enumerate(per_level):
        for x, mass in zip(words_of_length(n), level_masses):
            masses[x] = mass
    logger.debug("Built cylinder measure to depth %d (%d cylinders)", depth, len(masses))
    return CylinderMeasure(depth=depth, masses=masses, precision_bits=ctx.precision_bits)


def cylinder_table(measure: CylinderMeasure, ctx: QContext, tolerance: Any = DEFAULT_MARGIN) -> pd.DataFrame:
    """Columns word, mass, bound ([2]_qκ/√2)^{|x|}, consistent"""
    base = geometric_base(ctx)
    defects = set(measure.consistency_defects(tolerance))
    rows = []
    for x in sorted(measure.masses, key=Word.sort_key):
        rows.append({
            "word": format_word(x),
            "mass": measure.masses[x],
            "bound": base ** len(x),
            "consistent": x not in defects,
        })
    return pd.DataFrame(rows, columns=["word", "mass", "bound", "consistent"])


def non_atomicity_report(x: Word, k_max: int, ctx: QContext, margin: Any = DEFAULT_MARGIN) -> NonAtomicityReport:
    """
    Check ω_I(∂I(x)) ≤ ([2]_qκ/√2)^{|x|}, the base being < 1, and
    ω_I(∂I(xα^{(k+1)})) ≤ 2^{-k} for α ∈ {u, ū} and 1 ≤ k ≤ k_max.
    """
    with mpmath.workprec(ctx.precision_bits):
        mass = harmonic_cylinder_mass(x, ctx)
        base = geometric_base(ctx)
        bound = base ** len(x)
        decay = []
        for alpha in (Letter.U, Letter.UBAR):
            for k in range(1, k_max + 1):
                w = x + alternating_word(alpha, k + 1)
                m = harmonic_cylinder_mass(w, ctx)
                b = mpmath.mpf(2) ** -k
                decay.append(DecayCheck(alpha=alpha.value, k=k, word=format_word(w), mass=m, bound=b, holds=within(m, b, margin)))
        base_below_one = base < 1
        geometric_holds = within(mass, bound, margin)
    return NonAtomicityReport(
        word=format_word(x), mass=mass, base=base, base_below_one=base_below_one,
        geometric_bound=bound, geometric_holds=geometric_holds, decay=decay,
        passed=base_below_one and geometric_holds and all(d.holds for d in decay),
    )


def qtr_x_times_mass(qtr_x_value: Any, x: Word, ctx: QContext) -> Any:
    """ω(ψ_{x,∞}(a)) = qtr_x(a) · ω_I(∂I(x)) for a caller-supplied scalar qtr_x(a)"""
    with mpmath.workprec(ctx.precision_bits):
        return mpmath.mpf(qtr_x_value) * harmonic_cylinder_mass(x, ctx)


__all__ = [
    "EMPTY",
    "MAX_CYLINDER_DEPTH",
    "build_cylinder_measure",
    "cylinder_table",
    "dimq_cylinder_level",
    "dimq_ratio_limit",
    "geometric_base",
    "harmonic_cylinder_mass",
    "non_atomicity_report",
    "qtr_x_times_mass",
]
