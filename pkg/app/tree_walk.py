"""
Tree Walk Module

The classical Markov chain on the tree I of words induced by the qtr_1 random
walk.  From x a letter γ ∈ {u, ū} is drawn with weight ½ and the chain moves
to a summand z of x⊗γ with probability dim_q(z) / (dim_q(x) dim_q(u)):

- x empty, or x ending in γ: x⊗γ = xγ, so the move to xγ is certain
- otherwise x⊗γ = xγ ⊕ x', split between the extension and the parent x'

With l the final block length of x the split is [l+2]_q / ([l+1]_q [2]_q)
outward and [l]_q / ([l+1]_q [2]_q) inward.

Monte Carlo runs are vectorised over blocks of paths.  Block b draws from a
Philox stream keyed by SeedSequence([seed, b]) and blocks have a fixed size,
so for a given (seed, n_paths) the output is the same for every worker count.
"""

import logging
import math
from collections import defaultdict
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import mpmath
import numpy as np
import pandas as pd

from .boundary import harmonic_cylinder_mass
from .exceptions import MissingNeighbourError, ParameterRangeError
from .fusion import EMPTY, Letter, Word, block_decomposition, format_word, words_of_length, words_up_to
from .logging_config import metrics_logger
from .models import CylinderEstimate, HittingEstimate, QContext, WalkConfig
from .parallel import map_ordered
from .qarith import cached_q_number

logger = logging.getLogger(__name__)

BLOCK_SIZE = 8192
LETTERS = (Letter.U, Letter.UBAR)


class WalkKernel:
    """Transition probabilities of the walk; rows are computed on demand"""

    def __init__(self, ctx: QContext):
        self.ctx = ctx

    def _split(self, l: int) -> Tuple[Any, Any]:
        """(outward, inward) conditional probabilities for a cancelling letter"""
        prec, q = self.ctx.precision_bits, self.ctx.q
        with mpmath.workprec(prec):
            denom = cached_q_number(l + 1, q, prec) * self.ctx.dim_u
            return cached_q_number(l + 2, q, prec) / denom, cached_q_number(l, q, prec) / denom

    def step_distribution(self, x: Word) -> List[Tuple[Word, Any]]:
        with mpmath.workprec(self.ctx.precision_bits):
            half = mpmath.mpf(1) / 2
            if not x:
                return [(Word.from_letters([g]), half) for g in LETTERS]
            l = block_decomposition(x)[-1][1]
            outward, inward = self._split(l)
            row = []
            for g in LETTERS:
                extended = x + Word.from_letters([g])
                if g == x.last_letter:
                    row.append((extended, half))
                else:
                    row.append((extended, half * outward))
                    row.append((x.drop_last(), half * inward))
            return row

    def row_sum(self, x: Word) -> Any:
        with mpmath.workprec(self.ctx.precision_bits):
            return mpmath.fsum(p for _, p in self.step_distribution(x))

    def average(self, f: Mapping[Word, Any], x: Word) -> Any:
        """Σ_y K(x, y) f(y)"""
        with mpmath.workprec(self.ctx.precision_bits):
            total = mpmath.mpf(0)
            for y, p in self.step_distribution(x):
                if y not in f:
                    raise MissingNeighbourError(format_word(y))
                total += p * f[y]
            return total


def step_distribution(x: Word, ctx: QContext) -> List[Tuple[Word, Any]]:
    """One kernel row as (word, probability) pairs; the probabilities sum to 1"""
    return WalkKernel(ctx).step_distribution(x)


def inward_probability(x: Word, ctx: QContext) -> Any:
    """Probability that one step from x lands on x'; zero at the root"""
    if not x:
        return mpmath.mpf(0)
    l = block_decomposition(x)[-1][1]
    _, inward = WalkKernel(ctx)._split(l)
    with mpmath.workprec(ctx.precision_bits):
        return inward / 2


def max_inward_probability(depth: int, ctx: QContext) -> Any:
    """
    max over 1 ≤ |x| ≤ depth of the inward probability.

    Only the final block length matters and [l]/[l+1] increases with l, so the
    maximum sits at the single alternating block of length depth.
    """
    if depth < 1:
        return mpmath.mpf(0)
    with mpmath.workprec(ctx.precision_bits):
        return max(inward_probability(Word.from_letters(
            Letter.from_bit(i % 2) for i in range(l)), ctx) for l in range(1, depth + 1))


def exact_distribution(n_steps: int, max_level: int, ctx: QContext) -> Dict[Word, Any]:
    """
    Law of the walk after n_steps from ε.

    Raises:
        ParameterRangeError: If n_steps exceeds max_level (the support would be truncated)
    """
    if n_steps < 0 or n_steps > max_level:
        raise ParameterRangeError(f"n_steps must lie in [0, max_level={max_level}], got {n_steps}")
    kernel = WalkKernel(ctx)
    with mpmath.workprec(ctx.precision_bits):
        dist: Dict[Word, Any] = {EMPTY: mpmath.mpf(1)}
        for _ in range(n_steps):
            nxt: Dict[Word, Any] = defaultdict(lambda: mpmath.mpf(0))
            for x, mass in dist.items():
                for y, p in kernel.step_distribution(x):
                    nxt[y] += mass * p
            dist = dict(nxt)
    return dist


def level_marginal(distribution: Mapping[Word, Any], precision_bits: int = 128) -> Dict[int, Any]:
    """Aggregate a word distribution to levels |x|, summing at ``precision_bits``"""
    by_level: Dict[int, List[Any]] = defaultdict(list)
    for x, mass in distribution.items():
        by_level[len(x)].append(mass)
    with mpmath.workprec(precision_bits):
        return {n: mpmath.fsum(by_level[n]) for n in sorted(by_level)}


def harmonicity_residual(
    f: Mapping[Word, Any], ctx: QContext, interior: Optional[Iterable[Word]] = None
) -> Any:
    """
    max over interior x of |f(x) - Σ_y K(x, y) f(y)|.

    The interior defaults to the words of f below its top level, which is
    the whole ball when f is given on a ball.

    Raises:
        MissingNeighbourError: If an interior word or one of its neighbours has no value
    """
    kernel = WalkKernel(ctx)
    if interior is None:
        top = max((len(x) for x in f), default=0)
        interior = [x for x in f if len(x) < top]
    with mpmath.workprec(ctx.precision_bits):
        worst = mpmath.mpf(0)
        for x in interior:
            if x not in f:
                raise MissingNeighbourError(format_word(x))
            worst = max(worst, abs(mpmath.mpf(f[x]) - kernel.average(f, x)))
        return worst


# Monte Carlo

def outward_table(ctx: QContext, max_block: int) -> np.ndarray:
    """float64 [l+2]/([l+1][2]) indexed by final block length l; entry 0 unused"""
    kernel = WalkKernel(ctx)
    table = np.ones(max_block + 2, dtype=np.float64)
    for l in range(1, max_block + 2):
        table[l] = float(kernel._split(l)[0])
    return table


def _last_block_lengths(bits: np.ndarray, length: np.ndarray) -> np.ndarray:
    """Final alternating block length of each packed word"""
    run = np.where(length > 0, 1, 0).astype(np.int64)
    for _ in range(int(length.max(initial=0))):
        pos = length - 1 - run
        safe = np.maximum(pos, 0)
        cont = (run < length) & (((bits >> safe) & 1) != ((bits >> (safe + 1)) & 1))
        if not cont.any():
            break
        run += cont
    return run


def _simulate_block(args: Tuple) -> Tuple[np.ndarray, int, int, int]:
    """One block of paths; returns (prefix counts, completed, failures, root returns)"""
    block_index, size, seed, start_bits, start_len, escape_level, record_depth, step_cap, p_out = args
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block_index])))

    bits = np.full(size, start_bits, dtype=np.int64)
    length = np.full(size, start_len, dtype=np.int64)
    block = _last_block_lengths(bits, length)
    returned = np.zeros(size, dtype=bool)
    active = length < escape_level
    prefix = np.where(active, -1, bits & ((1 << record_depth) - 1))

    one = np.int64(1)
    steps = 0
    while active.any() and steps < step_cap:
        a = np.flatnonzero(active)
        gamma = rng.integers(0, 2, size=a.size, dtype=np.int64)
        unif = rng.random(a.size)
        B, L, l = bits[a], length[a], block[a]

        last = (B >> np.maximum(L - 1, 0)) & 1
        same = (L == 0) | (last == gamma)
        extend = same | (unif < p_out[np.minimum(l, p_out.size - 1)])

        new_bits = np.where(extend, B | (gamma << L), B & ((one << np.maximum(L - 1, 0)) - 1))
        new_len = np.where(extend, L + 1, L - 1)
        new_block = np.where(extend, np.where(same, 1, l + 1), l - 1)
        lost = (new_block == 0) & (new_len > 0)
        if lost.any():
            new_block[lost] = _last_block_lengths(new_bits[lost], new_len[lost])

        bits[a], length[a], block[a] = new_bits, new_len, new_block
        returned[a] |= new_len == 0
        done = a[new_len >= escape_level]
        prefix[done] = new_bits[new_len >= escape_level] & ((1 << record_depth) - 1)
        active[done] = False
        steps += 1

    counts = np.bincount(prefix[prefix >= 0], minlength=1 << record_depth).astype(np.int64)
    failures = int(active.sum())
    return counts, size - failures, failures, int(returned.sum())


def monte_carlo_hitting(cfg: WalkConfig, ctx: QContext, start: Word = EMPTY) -> HittingEstimate:
    """
    Exit law at level cfg.escape_level, read off at depth cfg.record_depth.

    Each path runs from ``start`` until it first reaches cfg.escape_level;
    paths still running after cfg.step_cap steps are counted as failures and
    left out of the frequencies.  Closed-form masses and z-scores are attached
    for walks started at ε.
    """
    if len(start) >= cfg.escape_level:
        raise ParameterRangeError("start word must lie below the escape level")
    p_out = outward_table(ctx, cfg.escape_level + 1)
    n_blocks = math.ceil(cfg.n_paths / BLOCK_SIZE)
    tasks = [
        (b, min(BLOCK_SIZE, cfg.n_paths - b * BLOCK_SIZE), cfg.seed, start.bits, len(start),
         cfg.escape_level, cfg.record_depth, cfg.step_cap, p_out)
        for b in range(n_blocks)
    ]
    results = map_ordered(_simulate_block, tasks, cfg.workers)

    counts = np.zeros(1 << cfg.record_depth, dtype=np.int64)
    completed = failures = root_returns = 0
    for c, done, failed, returns in results:  # block order
        counts += c
        completed += done
        failures += failed
        root_returns += returns

    rows = []
    for x in words_of_length(cfg.record_depth):
        count = int(counts[x.bits])
        p_hat = count / completed if completed else 0.0
        stderr = math.sqrt(p_hat * (1 - p_hat) / completed) if completed else 0.0
        closed = z = None
        if not start:
            closed = harmonic_cylinder_mass(x, ctx)
            spread = stderr or (1.0 / completed if completed else 1.0)
            z = (p_hat - float(closed)) / spread
        rows.append(CylinderEstimate(
            word=format_word(x), count=count, estimate=p_hat, stderr=stderr, closed_form=closed, z_score=z,
        ))

    if failures:
        logger.warning("%d of %d paths hit the step cap %d", failures, cfg.n_paths, cfg.step_cap)
    metrics_logger.info(f"WALK|{cfg.n_paths}|{cfg.seed}|{cfg.workers}|{failures}")
    return HittingEstimate(
        config=cfg, start=format_word(start), completed=completed,
        failures=failures, root_returns=root_returns, rows=rows,
    )


def hitting_probability_map(target: Word, radius: int, cfg: WalkConfig, ctx: QContext) -> Dict[Word, float]:
    """
    Empirical P_x(exit through ∂I(target)) for every start |x| ≤ radius + 1.

    The result is defined on a ball together with its outer neighbours, the
    input shape harmonicity_residual expects.  cfg.record_depth is replaced
    by |target|.
    """
    run_cfg = cfg.model_copy(update={"record_depth": len(target)})
    out: Dict[Word, float] = {}
    for x in words_up_to(radius + 1):
        estimate = monte_carlo_hitting(run_cfg, ctx, start=x)
        row = next(r for r in estimate.rows if r.word == format_word(target))
        out[x] = row.estimate
    return out


def hitting_table(estimate: HittingEstimate) -> pd.DataFrame:
    """Columns word, estimate, stderr, closed_form, z_score"""
    return pd.DataFrame(
        [{
            "word": r.word, "estimate": r.estimate, "stderr": r.stderr,
            "closed_form": r.closed_form, "z_score": r.z_score,
        } for r in estimate.rows],
        columns=["word", "estimate", "stderr", "closed_form", "z_score"],
    )
