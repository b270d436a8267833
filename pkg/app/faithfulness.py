"""
Faithfulness Module

Word combinatorics behind strong C*-faithfulness of the boundary action:

- the sandwich search: the least N such that every subobject of U⊗x⊗U,
  U = (uū)^N, starts with u and ends with ū, for all x in a finite set F
- support scans: which s give U⊗s, resp. t⊗s with t ⊂ U⊗x, a summand with a
  given prefix (ū by default), and whether the two sets of s are disjoint
- the support-level witness norm, exactly 0 when they are
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from .exceptions import ParameterRangeError
from .fusion import (
    EMPTY, UBAR, Letter, Word, alternating_word, format_word, iterated_decompose,
    tensor_decompose, triple_decompose, words_up_to,
)
from .models import SandwichCertificate, SandwichFailure, SupportReport, SupportViolation, WitnessNorm
from .parallel import chunked, map_ordered

logger = logging.getLogger(__name__)

DEFAULT_SCAN_DEPTH = 12
SCAN_CHUNK = 512


def sandwich_word(N: int) -> Word:
    """U = (uū)^N"""
    return alternating_word(Letter.U, 2 * N)


def _is_sandwiched(w: Word) -> bool:
    return bool(w) and w.first_letter == Letter.U and w.last_letter == Letter.UBAR


def _check_F(F_set: Iterable[Word]) -> List[Word]:
    words = sorted(set(F_set), key=Word.sort_key)
    if EMPTY in words:
        raise ParameterRangeError("The empty word cannot belong to F")
    return words


def _sandwich_witness(U: Word, x: Word) -> Optional[Word]:
    for w in sorted(triple_decompose(U, x, U), key=Word.sort_key):
        if not _is_sandwiched(w):
            return w
    return None


def sandwich_holds(F_set: Iterable[Word], N: int) -> bool:
    """Every subobject of U⊗x⊗U is u-initial and ū-final, for all x ∈ F_set"""
    U = sandwich_word(N)
    return all(_sandwich_witness(U, x) is None for x in _check_F(F_set))


def banica_min_N(F_set: Iterable[Word], N_max: int):
    """
    Least N ≤ N_max for which every subobject of U⊗x⊗U is u-initial and
    ū-final, for all x ∈ F_set.

    The search is exhaustive over subobjects; a found certificate is checked
    again against the right-associated decomposition.

    Returns:
        SandwichCertificate, or SandwichFailure listing one offending
        subobject per x for every N tried

    Raises:
        ParameterRangeError: If F contains the empty word or N_max < 1
    """
    words = _check_F(F_set)
    if N_max < 1:
        raise ParameterRangeError("N_max must be at least 1")
    labels = [format_word(x) for x in words]
    witnesses: Dict[int, Dict[str, str]] = {}

    for N in range(1, N_max + 1):
        U = sandwich_word(N)
        failed = {}
        for x in words:
            w = _sandwich_witness(U, x)
            if w is not None:
                failed[format_word(x)] = format_word(w)
        if failed:
            witnesses[N] = failed
            continue

        subobjects = {}
        reverified = True
        for x in words:
            left = triple_decompose(U, x, U)
            right = triple_decompose(U, x, U, right_associated=True)
            reverified &= left == right and all(_is_sandwiched(w) for w in right)
            subobjects[format_word(x)] = [format_word(w) for w in sorted(left, key=Word.sort_key)]
        logger.info("Sandwich certificate for F=%s at N=%d", labels, N)
        return SandwichCertificate(F_set=labels, N=N, subobjects=subobjects, reverified=reverified)

    logger.warning("No sandwich N <= %d for F=%s", N_max, labels)
    return SandwichFailure(F_set=labels, N_max=N_max, witnesses=witnesses)


def min_N_table(max_len: int, N_max: int) -> pd.DataFrame:
    """Least sandwich N for each nonempty |x| ≤ max_len; columns word, length, N (empty if none)"""
    rows = []
    for x in words_up_to(max_len, include_empty=False):
        result = banica_min_N([x], N_max)
        rows.append({
            "word": format_word(x),
            "length": len(x),
            "N": result.N if isinstance(result, SandwichCertificate) else None,
        })
    return pd.DataFrame(rows, columns=["word", "length", "N"]).astype({"N": "Int64"})


# Support scans

def _find_prefixed(summands: Iterable[Word], prefix: Word) -> Optional[Word]:
    for w in sorted(summands, key=Word.sort_key):
        if w.has_prefix(prefix):
            return w
    return None


def boundary_support_contains_prefix(prefix_stack: Sequence[Word], s: Word, prefix: Word) -> bool:
    """True iff f_1⊗…⊗f_m⊗s has a subobject starting with ``prefix``"""
    return _find_prefixed(iterated_decompose(list(prefix_stack) + [s]), prefix) is not None


def boundary_support_contains_ubar_initial(prefix_stack: Sequence[Word], s: Word) -> bool:
    return boundary_support_contains_prefix(prefix_stack, s, UBAR)


def _scan_chunk(args: Tuple[Sequence[Word], Word, Dict[Word, List[Word]], Word]):
    """(s in A, s in B, violation) for each s; B is reached through some t ⊂ U⊗x"""
    chunk, U, middles, prefix = args
    out = []
    for s in chunk:
        y = _find_prefixed(tensor_decompose(U, s), prefix)
        chain = None
        for x, ts in middles.items():
            for t in ts:
                z = _find_prefixed(tensor_decompose(t, s), prefix)
                if z is not None:
                    chain = (x, t, z)
                    break
            if chain:
                break
        violation = None
        if y is not None and chain is not None:
            x, t, z = chain
            violation = SupportViolation(
                s=format_word(s), x=format_word(x), t=format_word(t), z=format_word(z), y=format_word(y),
            )
        out.append((y is not None, chain is not None, violation))
    return out


def disjoint_support_check(
    F_set: Iterable[Word], N: int, L: int = DEFAULT_SCAN_DEPTH, prefix: Word = UBAR, workers: int = 1,
) -> SupportReport:
    """
    Scan every |s| ≤ L and check that no s lies in both

    - setA: U⊗s has a subobject starting with ``prefix``
    - setB: t⊗s has one for some subobject t of U⊗x, x ∈ F_set

    Every s in both sets is reported with the chain x → t → z and the
    summand y of U⊗s.
    """
    words = _check_F(F_set)
    if N < 1 or L < 0:
        raise ParameterRangeError("N must be positive and L non-negative")
    U = sandwich_word(N)
    middles = {x: sorted(tensor_decompose(U, x), key=Word.sort_key) for x in words}
    scanned = list(words_up_to(L))
    tasks = [(chunk, U, middles, prefix) for chunk in chunked(scanned, SCAN_CHUNK)]
    flags = [row for part in map_ordered(_scan_chunk, tasks, workers) for row in part]

    set_a, set_b, violations = [], [], []
    for s, (in_a, in_b, violation) in zip(scanned, flags):
        if in_a:
            set_a.append(format_word(s))
        if in_b:
            set_b.append(format_word(s))
        if violation is not None:
            violations.append(violation)

    if violations:
        logger.warning("Support overlap for F=%s, N=%d: first witness s=%s", [format_word(x) for x in words], N, violations[0].s)
    return SupportReport(
        N=N, L=L, F_set=[format_word(x) for x in words],
        setA=set_a, setB=set_b, violations=violations,
    )


def strong_faithfulness_witness_norm(
    p_words: Iterable[Word], x_cyl: Word = UBAR, N: int = 1, L: int = DEFAULT_SCAN_DEPTH, workers: int = 1,
) -> WitnessNorm:
    """
    ‖(p⊗b)(α⊗id)(b)‖ at support level for b = (p_U⊗1)β(π_{x_cyl}).

    0 when the supports are disjoint on the scanned range, otherwise 1 with
    the overlapping report attached.  An empty p_words gives 0.
    """
    words = _check_F(p_words)
    if not words:
        return WitnessNorm(value=0.0)
    report = disjoint_support_check(words, N, L, prefix=x_cyl, workers=workers)
    return WitnessNorm(value=0.0 if report.disjoint else 1.0, report=report)
