"""
Verification Module

Named suites of invariant checks over every module.  ``Verifier.suites`` maps
a suite name to the method producing its checks; ``all`` runs them in order.
Each check is timed and written to the metrics log as

    CHECK|suite|name|pass|margin|seconds

Default sizes keep a full run to a few minutes; the ``params`` mapping
raises them to acceptance scale (n_max=16, paths=10**6, samples=10**4, ...).
"""

import logging
import math
import time
from typing import Any, Callable, Dict, Iterable, List, Optional

import mpmath
import numpy as np

from .boundary import (
    build_cylinder_measure, dimq_ratio_limit, geometric_base, harmonic_cylinder_mass, non_atomicity_report,
)
from .central_traces import (
    CentralElement, LevelElement, aggregate_levels, convolve, dimension_character, gap_table,
    qtr1_power_distribution, restricted_trace_gap,
)
from .exceptions import ParameterRangeError
from .faithfulness import banica_min_N, disjoint_support_check, sandwich_holds, strong_faithfulness_witness_norm
from .fusion import U, Word, conjugate, parse_word, tensor_decompose, triple_decompose, words_of_length, words_up_to
from .logging_config import metrics_logger
from .matrix_lemmas import (
    PsdPair, asymptotic_orthogonality_check, asymptotic_orthogonality_sweep, easy_orthogonality_check,
    easy_orthogonality_sweep, norm_self_consistency, random_psd, theta_rotation_probe,
)
from .models import CheckResult, QContext, QSpectrum, SandwichCertificate, VerificationReport, WalkConfig, nstr
from .qarith import context_from_F, qdim_level, qdim_word, random_parameter_matrix, sample_words, verify_woronowicz_bounds
from .tree_walk import BLOCK_SIZE, WalkKernel, exact_distribution, level_marginal, max_inward_probability, monte_carlo_hitting

logger = logging.getLogger(__name__)

SUITE_ORDER = [
    "fusion", "associativity", "level-dimension", "convolution", "trace-bound", "harmonic",
    "cylinder", "walk", "montecarlo", "woronowicz", "faithfulness", "lemmas",
]

DEFAULT_PARAMS: Dict[str, Any] = {
    "fusion_len": 4,
    "random_pairs": 500,
    "random_len": 8,
    "assoc_len": 4,
    "level_max": 16,
    "convolution_max": 10,
    "n_max": 16,
    "enumerate_max": 12,
    "harmonic_len": 6,
    "harmonic_offset": 200,
    "cylinder_depth": 10,
    "atom_len": 5,
    "atom_k": 40,
    "walk_levels": 14,
    "row_len": 10,
    "paths": 100_000,
    "escape": 60,
    "z_max": 3.0,
    "random_F": 100,
    "woronowicz_words": 1000,
    "singleton_len": 4,
    "N_max": 8,
    "scan_depth": 12,
    "samples": 1000,
    "dim_max": 8,
    "theta_samples": 1000,
    "theta_k": 2,
}


class Verifier:
    """
    Runs verification suites against one numeric context.

    Args:
        ctx: Numeric context
        spectrum: Spectral data when the context came from a matrix F
        margin: Relative margin for high-precision inequalities
        matrix_margin: Absolute margin for double-precision operator checks
        seed: Seed for every randomised check
        workers: Process count for the parallel checks
        params: Overrides for DEFAULT_PARAMS
    """

    def __init__(
        self,
        ctx: QContext,
        spectrum: Optional[QSpectrum] = None,
        margin: Any = "1e-25",
        matrix_margin: float = 1e-9,
        seed: int = 7,
        workers: int = 1,
        params: Optional[Dict[str, Any]] = None,
    ):
        self.ctx = ctx
        self.spectrum = spectrum
        with mpmath.workprec(ctx.precision_bits):
            self.margin = mpmath.mpf(repr(margin) if isinstance(margin, float) else margin)
        self.matrix_margin = matrix_margin
        self.seed = seed
        self.workers = workers
        unknown = set(params or {}) - set(DEFAULT_PARAMS)
        if unknown:
            raise ParameterRangeError(f"Unknown verification parameters: {sorted(unknown)}")
        self.params = {**DEFAULT_PARAMS, **(params or {})}
        self.suites: Dict[str, Callable[[], Iterable[CheckResult]]] = {
            "fusion": self._check_fusion,
            "associativity": self._check_associativity,
            "level-dimension": self._check_level_dimension,
            "convolution": self._check_convolution,
            "trace-bound": self._check_trace_bound,
            "harmonic": self._check_harmonic,
            "cylinder": self._check_cylinder,
            "walk": self._check_walk,
            "montecarlo": self._check_montecarlo,
            "woronowicz": self._check_woronowicz,
            "faithfulness": self._check_faithfulness,
            "lemmas": self._check_lemmas,
        }

    def run(self, selected: Iterable[str]) -> VerificationReport:
        """
        Run the selected suites in canonical order.

        Raises:
            ParameterRangeError: If a suite name is unknown
        """
        names = list(selected)
        if "all" in names:
            names = list(SUITE_ORDER)
        unknown = [n for n in names if n not in self.suites]
        if unknown:
            raise ParameterRangeError(f"Unknown suite(s): {unknown}; choose from {SUITE_ORDER + ['all']}")
        names = [n for n in SUITE_ORDER if n in names]

        report = VerificationReport(suites=names, precision_bits=self.ctx.precision_bits)
        for name in names:
            logger.info("Running suite %s", name)
            report.checks.extend(self.suites[name]())
        logger.info("Verification finished: %d checks, %d failed", len(report.checks), len(report.failures()))
        return report

    # Helpers

    def _timed(self, suite: str, name: str, fn: Callable[[], tuple], margin: Any = None) -> CheckResult:
        """fn returns (passed, detail)"""
        margin = self.margin if margin is None else margin
        start = time.perf_counter()
        try:
            passed, detail = fn()
        except ParameterRangeError as e:
            passed, detail = False, {"error": str(e)}
        seconds = time.perf_counter() - start
        margin_text = nstr(margin) if not isinstance(margin, float) else repr(margin)
        metrics_logger.info(f"CHECK|{suite}|{name}|{passed}|{margin_text}|{seconds:.3f}")
        if not passed:
            logger.error("Check failed: %s/%s %s", suite, name, detail)
        return CheckResult(suite=suite, name=name, passed=bool(passed), margin=margin_text, detail=detail, seconds=seconds)

    def _rel_close(self, a: Any, b: Any, tol: Any = None) -> bool:
        with mpmath.workprec(self.ctx.precision_bits):
            tol = self.margin if tol is None else mpmath.mpf(tol)
            return abs(mpmath.mpf(a) - b) <= tol * max(1, abs(b))

    # Suites

    def _check_fusion(self) -> List[CheckResult]:
        p, ctx = self.params, self.ctx
        prec = ctx.precision_bits

        def pairs_multiplicative(pairs) -> tuple:
            worst = mpmath.mpf(0)
            bad = None
            with mpmath.workprec(prec):
                for x, y in pairs:
                    decomposition = tensor_decompose(x, y)
                    lhs = qdim_word(x, ctx) * qdim_word(y, ctx)
                    rhs = mpmath.fsum(qdim_word(w, ctx) * m for w, m in decomposition.items())
                    err = abs(lhs - rhs) / lhs
                    if err > worst:
                        worst = err
                    if not decomposition.is_multiplicity_free() and bad is None:
                        bad = (str(x), str(y))
            return worst <= self.margin and bad is None, {"worst_relative_error": nstr(worst), "multiplicity": bad}

        exhaustive = [(x, y) for x in words_up_to(p["fusion_len"]) for y in words_up_to(p["fusion_len"])]
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, 1]))
        random_pairs = list(zip(sample_words(p["random_pairs"], p["random_len"], rng), sample_words(p["random_pairs"], p["random_len"], rng)))

        def examples() -> tuple:
            cases = {
                ("u", "b"): {"ub", "e"},
                ("ub", "ub"): {"ubub", "ub", "e"},
                ("e", "ubu"): {"ubu"},
                ("uu", "uu"): {"uuuu"},
            }
            wrong = {}
            for (a, b), expected in cases.items():
                got = {str(w) for w in tensor_decompose(parse_word(a), parse_word(b))}
                if got != expected:
                    wrong[f"{a}x{b}"] = sorted(got)
            return not wrong, {"wrong": wrong}

        def conjugation() -> tuple:
            bad = []
            for x in words_up_to(p["fusion_len"]):
                for y in words_up_to(p["fusion_len"]):
                    lhs = {conjugate(w) for w in tensor_decompose(x, y)}
                    rhs = set(tensor_decompose(conjugate(y), conjugate(x)))
                    if lhs != rhs:
                        bad.append(f"{x}x{y}")
            return not bad, {"mismatches": bad[:5]}

        return [
            self._timed("fusion", "worked_examples", examples, margin=0.0),
            self._timed("fusion", "dimension_exhaustive", lambda: pairs_multiplicative(exhaustive)),
            self._timed("fusion", "dimension_random", lambda: pairs_multiplicative(random_pairs)),
            self._timed("fusion", "conjugation_compatible", conjugation, margin=0.0),
        ]

    def _check_associativity(self) -> List[CheckResult]:
        n = self.params["assoc_len"]

        def check() -> tuple:
            words = list(words_up_to(n))
            for x in words:
                for y in words:
                    for z in words:
                        if triple_decompose(x, y, z) != triple_decompose(x, y, z, right_associated=True):
                            return False, {"x": str(x), "y": str(y), "z": str(z)}
            return True, {"triples": len(words) ** 3}

        return [self._timed("associativity", f"exhaustive_len_{n}", check, margin=0.0)]

    def _check_level_dimension(self) -> List[CheckResult]:
        ctx, n_max = self.ctx, self.params["level_max"]

        def closed_form() -> tuple:
            worst = mpmath.mpf(0)
            with mpmath.workprec(ctx.precision_bits):
                for n in range(n_max + 1):
                    direct = mpmath.fsum(qdim_word(x, ctx) for x in words_of_length(n))
                    worst = max(worst, abs(direct - qdim_level(n, ctx)) / direct)
            return worst <= self.margin, {"n_max": n_max, "worst_relative_error": nstr(worst)}

        def recursion() -> tuple:
            worst = mpmath.mpf(0)
            with mpmath.workprec(ctx.precision_bits):
                for n in range(1, n_max):
                    lhs = 2 * ctx.dim_u * qdim_level(n, ctx)
                    rhs = qdim_level(n + 1, ctx) + 2 * qdim_level(n - 1, ctx)
                    worst = max(worst, abs(lhs - rhs) / lhs)
            return worst <= self.margin, {"worst_relative_error": nstr(worst)}

        return [
            self._timed("level-dimension", "closed_form_vs_sum", closed_form),
            self._timed("level-dimension", "birth_death_recursion", recursion),
        ]

    def _check_convolution(self) -> List[CheckResult]:
        n_max = self.params["convolution_max"]

        def check() -> tuple:
            first = CentralElement.level(1)
            for n in range(n_max + 1):
                product = aggregate_levels(convolve(first, CentralElement.level(n)))
                expected = LevelElement({n + 1: 1, n - 1: 2} if n else {1: 1})
                if product != expected:
                    return False, {"n": n, "got": {k: int(v) for k, v in product.items()}}
            return True, {"n_max": n_max}

        def morphism() -> tuple:
            ctx = self.ctx
            a = CentralElement.level(2)
            b = CentralElement.trace(parse_word("ub")) + CentralElement.trace(parse_word("uu"))
            with mpmath.workprec(ctx.precision_bits):
                lhs = dimension_character(convolve(a, b), ctx)
                rhs = dimension_character(a, ctx) * dimension_character(b, ctx)
            return self._rel_close(lhs, rhs), {"lhs": nstr(lhs), "rhs": nstr(rhs)}

        return [
            self._timed("convolution", "level_rule", check, margin=0.0),
            self._timed("convolution", "dimension_character", morphism),
        ]

    def _check_trace_bound(self) -> List[CheckResult]:
        ctx, p = self.ctx, self.params
        checks = []

        def sweep() -> tuple:
            table = gap_table(p["n_max"], ctx, margin=self.margin)
            failing = table[~table["pass"].astype(bool)]
            worst = table.assign(slack=table["bound"] - table["gap"])["slack"].min()
            return failing.empty, {"cells": len(table), "failing": len(failing), "min_slack": nstr(worst)}

        def dp_vs_enumeration() -> tuple:
            worst = mpmath.mpf(0)
            n_top = min(p["n_max"], p["enumerate_max"])
            for n in range(2, n_top + 1):
                for pp in range(1, n):
                    for k in range(1, n - pp + 1):
                        a = restricted_trace_gap(n, pp, k, ctx, method="dp")
                        b = restricted_trace_gap(n, pp, k, ctx, method="enumerate", workers=self.workers)
                        with mpmath.workprec(ctx.precision_bits):
                            worst = max(worst, abs(a - b))
            return worst <= self.margin, {"n_max": n_top, "worst_abs_difference": nstr(worst)}

        checks.append(self._timed("trace-bound", "gap_below_2^-k", sweep))
        checks.append(self._timed("trace-bound", "dp_equals_enumeration", dp_vs_enumeration))
        if ctx.q == 1:
            def reference_cell() -> tuple:
                gap = restricted_trace_gap(3, 1, 2, ctx)
                with mpmath.workprec(ctx.precision_bits):
                    sixth = mpmath.mpf(1) / 6
                return self._rel_close(gap, sixth), {"gap": nstr(gap)}
            checks.append(self._timed("trace-bound", "cell_n3_p1_k2", reference_cell))
        return checks

    def _check_harmonic(self) -> List[CheckResult]:
        ctx, p = self.ctx, self.params
        tol = mpmath.mpf("1e-12")

        def check() -> tuple:
            worst = mpmath.mpf(0)
            worst_word = None
            for x in words_up_to(p["harmonic_len"]):
                err = abs(dimq_ratio_limit(x, len(x) + p["harmonic_offset"], ctx) - harmonic_cylinder_mass(x, ctx))
                if err > worst:
                    worst, worst_word = err, str(x)
            return worst <= tol, {"worst_abs_error": nstr(worst), "word": worst_word}

        def known_values() -> tuple:
            root = harmonic_cylinder_mass(Word(0), ctx)
            single = harmonic_cylinder_mass(U, ctx)
            return self._rel_close(root, 1) and self._rel_close(single, mpmath.mpf(1) / 2), {
                "mass_e": nstr(root), "mass_u": nstr(single),
            }

        return [
            self._timed("harmonic", "ratio_limit_matches_closed_form", check, margin=tol),
            self._timed("harmonic", "root_and_letter_masses", known_values),
        ]

    def _check_cylinder(self) -> List[CheckResult]:
        ctx, p = self.ctx, self.params

        def consistency() -> tuple:
            measure = build_cylinder_measure(p["cylinder_depth"], ctx, workers=self.workers)
            with mpmath.workprec(ctx.precision_bits):
                worst = max(abs(measure.level_total(n) - 1) for n in range(p["cylinder_depth"] + 1))
            defects = measure.consistency_defects(self.margin)
            return worst <= self.margin and not defects, {
                "worst_level_defect": nstr(worst), "defects": [str(x) for x in defects[:5]],
            }

        def non_atomic() -> tuple:
            failing = []
            for x in words_up_to(p["atom_len"]):
                report = non_atomicity_report(x, p["atom_k"], ctx, self.margin)
                if not report.passed:
                    failing.append(report.word)
            return not failing, {"base": nstr(geometric_base(ctx)), "failing": failing[:5]}

        return [
            self._timed("cylinder", "consistency_and_level_sums", consistency),
            self._timed("cylinder", "non_atomicity_bounds", non_atomic),
        ]

    def _check_walk(self) -> List[CheckResult]:
        ctx, p = self.ctx, self.params
        tol = mpmath.mpf("1e-20")

        def rows() -> tuple:
            kernel = WalkKernel(ctx)
            with mpmath.workprec(ctx.precision_bits):
                worst = max(abs(kernel.row_sum(x) - 1) for x in words_up_to(p["row_len"]))
            return worst <= self.margin, {"worst_row_defect": nstr(worst)}

        def coherence() -> tuple:
            worst = mpmath.mpf(0)
            for n in range(p["walk_levels"] + 1):
                marginal = level_marginal(exact_distribution(n, n, ctx), ctx.precision_bits)
                oracle = qtr1_power_distribution(n, ctx)
                with mpmath.workprec(ctx.precision_bits):
                    for k in set(marginal) | set(oracle):
                        worst = max(worst, abs(marginal.get(k, 0) - oracle.get(k, 0)))
            return worst <= tol, {"n_max": p["walk_levels"], "worst_abs_difference": nstr(worst)}

        def drift() -> tuple:
            inward = max_inward_probability(p["escape"], ctx)
            return inward < mpmath.mpf(1) / 2, {"max_inward": nstr(inward)}

        return [
            self._timed("walk", "kernel_rows_sum_to_one", rows),
            self._timed("walk", "level_marginal_matches_trace_power", coherence, margin=tol),
            self._timed("walk", "inward_drift_below_half", drift),
        ]

    def _check_montecarlo(self) -> List[CheckResult]:
        ctx, p = self.ctx, self.params

        def exit_law() -> tuple:
            cfg = WalkConfig(seed=self.seed, n_paths=p["paths"], escape_level=p["escape"], record_depth=2, workers=self.workers)
            est = monte_carlo_hitting(cfg, ctx)
            return est.max_abs_z <= p["z_max"] and est.failures == 0, {
                "max_abs_z": est.max_abs_z, "failures": est.failures, "root_returns": est.root_returns,
                "estimates": {r.word: r.estimate for r in est.rows},
            }

        def reproducible() -> tuple:
            cfg = WalkConfig(seed=self.seed, n_paths=2 * BLOCK_SIZE, escape_level=20, record_depth=2, workers=self.workers)
            first = monte_carlo_hitting(cfg, ctx)
            second = monte_carlo_hitting(cfg, ctx)
            return first.model_dump_json() == second.model_dump_json(), {}

        return [
            self._timed("montecarlo", "exit_law_within_z_max", exit_law, margin=float(p["z_max"])),
            self._timed("montecarlo", "seeded_rerun_identical", reproducible, margin=0.0),
        ]

    def _check_woronowicz(self) -> List[CheckResult]:
        p = self.params
        checks = []
        prec = self.ctx.precision_bits
        strict = 1e-9

        if self.spectrum is not None:
            def supplied() -> tuple:
                rng = np.random.default_rng(np.random.SeedSequence([self.seed, 2]))
                report = verify_woronowicz_bounds(self.ctx, self.spectrum, sample_words(p["woronowicz_words"], 12, rng), self.margin)
                return report.passed, {"N": report.N, "q_rho": nstr(report.q_rho), "boundary_case": report.boundary_case}
            checks.append(self._timed("woronowicz", "supplied_F", supplied))

        def random_family() -> tuple:
            worst = 0.0
            for N in (3, 4, 5):
                rng = np.random.default_rng(np.random.SeedSequence([self.seed, 3, N]))
                for _ in range(p["random_F"]):
                    ctx, _ = context_from_F(random_parameter_matrix(N, rng), prec)
                    worst = max(worst, float(ctx.q * ctx.rho))
            return worst <= 1 - strict, {"max_q_rho": worst}

        def two_by_two() -> tuple:
            values = {}
            for t in (1.5, 2.0, 5.0):
                ctx, _ = context_from_F([[t, 0], [0, 1]], prec)
                values[str(t)] = float(ctx.q * ctx.rho)
            return all(abs(v - 1) <= 1e-12 for v in values.values()), {"q_rho": values}

        def dimension_lower_bound() -> tuple:
            rng = np.random.default_rng(np.random.SeedSequence([self.seed, 4]))
            with mpmath.workprec(prec):
                bad = [str(x) for x in sample_words(p["woronowicz_words"], 16, rng)
                       if qdim_word(x, self.ctx) < self.ctx.q ** -len(x) * (1 - self.margin)]
            return not bad, {"violations": bad[:5]}

        checks.append(self._timed("woronowicz", "q_rho_below_one_N3_to_5", random_family, margin=strict))
        checks.append(self._timed("woronowicz", "q_rho_one_for_N2", two_by_two, margin=1e-12))
        checks.append(self._timed("woronowicz", "dim_at_least_q^-|x|", dimension_lower_bound))
        return checks

    def _check_faithfulness(self) -> List[CheckResult]:
        p = self.params

        def single_letter() -> tuple:
            cert = banica_min_N([U], p["N_max"])
            ok = isinstance(cert, SandwichCertificate) and cert.N == 1 and cert.reverified
            return ok, {"result": cert.model_dump()}

        def least_N(words) -> Optional[int]:
            cert = banica_min_N(words, p["N_max"])
            return cert.N if isinstance(cert, SandwichCertificate) and cert.reverified else None

        # words such as uū admit no N at all: U ⊂ U⊗uū and ε ⊂ U⊗U
        def singletons() -> tuple:
            table, asymmetric, non_monotone = {}, [], []
            for x in words_up_to(p["singleton_len"], include_empty=False):
                n = table[str(x)] = least_N([x])
                if n != least_N([conjugate(x)]):
                    asymmetric.append(str(x))
                if n is not None and len(x) <= 3 and not all(sandwich_holds([x], k) for k in (n + 1, n + 2)):
                    non_monotone.append(str(x))
            ok = not asymmetric and not non_monotone and table.get("u") == 1
            return ok, {
                "N": table, "uncertified": [w for w, n in table.items() if n is None],
                "asymmetric": asymmetric, "non_monotone": non_monotone,
            }

        def certified_disjoint() -> tuple:
            overlapping = []
            for x in words_up_to(3, include_empty=False):
                n = least_N([x])
                if n is not None and not disjoint_support_check([x], n, min(p["scan_depth"], 8), workers=self.workers).disjoint:
                    overlapping.append(str(x))
            return not overlapping, {"overlapping": overlapping}

        def disjoint() -> tuple:
            report = disjoint_support_check([U], 1, p["scan_depth"], workers=self.workers)
            norm = strong_faithfulness_witness_norm([U], N=1, L=p["scan_depth"], workers=self.workers)
            return report.disjoint and norm.value == 0.0, {
                "scanned_depth": report.L, "setA": len(report.setA), "setB": len(report.setB), "witness_norm": norm.value,
            }

        def negative_control() -> tuple:
            corrupted = [parse_word("ubb")]
            report = disjoint_support_check(corrupted, 1, min(p["scan_depth"], 6))
            ok = not report.disjoint and not isinstance(banica_min_N(corrupted, 1), SandwichCertificate)
            return ok, {"first_violation": report.violations[0].model_dump() if report.violations else None}

        return [
            self._timed("faithfulness", "min_N_for_u_is_1", single_letter, margin=0.0),
            self._timed("faithfulness", "singleton_certificates", singletons, margin=0.0),
            self._timed("faithfulness", "certified_words_have_disjoint_support", certified_disjoint, margin=0.0),
            self._timed("faithfulness", "disjoint_support_and_zero_witness", disjoint, margin=0.0),
            self._timed("faithfulness", "corrupted_N_has_witness", negative_control, margin=0.0),
        ]

    def _check_lemmas(self) -> List[CheckResult]:
        p, m = self.params, self.matrix_margin
        checks = []

        def fixed_examples() -> tuple:
            orth = asymptotic_orthogonality_check(PsdPair.of(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])), 0.1, m)
            half = asymptotic_orthogonality_check(PsdPair.of(0.5 * np.eye(2), 0.5 * np.eye(2)), 0.5, m)
            theta = math.pi / 5
            v = np.array([math.cos(theta), math.sin(theta)])
            proj = easy_orthogonality_check(
                PsdPair.of(np.diag([1.0, 0.0]), np.outer(v, v)), math.cos(theta), m,
            )
            rng = np.random.default_rng(np.random.SeedSequence([self.seed, 5]))
            consistent = all(norm_self_consistency(random_psd(4, rng) - random_psd(4, rng)) for _ in range(50))
            ok = orth.passed and half.passed and proj.passed and abs(proj.value - (1 + math.cos(theta))) <= 1e-9 and consistent
            return ok, {"orthogonal": orth.value, "half_identity": half.value, "projections": proj.value}

        checks.append(self._timed("lemmas", "worked_examples", fixed_examples, margin=m))
        for eps in (0.05, 0.1, 0.25, 0.5):
            def sweep(eps=eps) -> tuple:
                s = asymptotic_orthogonality_sweep(eps, p["samples"], self.seed, p["dim_max"], m, self.workers)
                return s.passed and s.applicable > 0, s.model_dump()
            checks.append(self._timed("lemmas", f"asymptotic_orthogonality_eps_{eps}", sweep, margin=m))

        def easy() -> tuple:
            s = easy_orthogonality_sweep(p["samples"], self.seed, p["dim_max"], m, self.workers)
            return s.passed, s.model_dump()
        checks.append(self._timed("lemmas", "easy_orthogonality", easy, margin=m))

        for label, theta in (("pi/12", math.pi / 12), ("pi/6", math.pi / 6), ("pi/3", math.pi / 3)):
            def probe(theta=theta) -> tuple:
                r = theta_rotation_probe(theta, p["theta_k"], p["theta_samples"], self.seed, margin=m, workers=self.workers)
                return r.passed, r.model_dump()
            checks.append(self._timed("lemmas", f"theta_probe_{label}", probe, margin=m))
        return checks
