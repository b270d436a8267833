"""
Command-line front end.

    python -m app decompose ub ub
    python -m app verify --suite trace-bound --n-max 16 --q 1
    python -m app walk --q 1 --paths 1000000 --escape 60 --depth 2
    python -m app boundary --q 0.5 --depth 10
    python -m app lemmas --which l49 --samples 10000
    python -m app faithfulness --F-words u,ub --N-max 8 --L 12

Every run is resolved into a RunConfig first; identical configs give
byte-identical output.  Reals are printed with 20 significant digits and a
trailing ``precision_bits`` line.  Exit codes: 0 success, 1 verification
failure, 2 configuration or precondition error.
"""

import argparse
import json
import logging
import math
import sys
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import mpmath
import pandas as pd
from pydantic import ValidationError

from .boundary import build_cylinder_measure, cylinder_table, dimq_ratio_limit
from .central_traces import gap_table
from .config import Settings, get_settings
from .exceptions import ContextError, ToolkitError, VerificationFailure
from .faithfulness import banica_min_N, disjoint_support_check, min_N_table, strong_faithfulness_witness_norm
from .fusion import format_word, parse_word, tensor_decompose
from .logging_config import configure_logging
from .matrix_lemmas import asymptotic_orthogonality_sweep, easy_orthogonality_sweep, theta_rotation_probe
from .models import ContextSource, QContext, QSpectrum, RunConfig, SandwichCertificate, WalkConfig, nstr
from .qarith import context_from_F, context_from_q, qdim_word
from .tree_walk import hitting_table, monte_carlo_hitting
from .verification import SUITE_ORDER, Verifier

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_CONFIG_ERROR = 2

THETAS = {"pi/12": math.pi / 12, "pi/6": math.pi / 6, "pi/3": math.pi / 3}

# --which accepts both spellings
LEMMA_ALIASES = {"l49": "asymptotic", "l410": "easy", "asymptotic": "asymptotic", "easy": "easy", "theta": "theta"}


class ArgumentError(ToolkitError):
    """argparse usage error, routed to exit code 2"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _global_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group("context")
    source.add_argument("--q", type=float, help="deformation parameter q in (0, 1]")
    source.add_argument("--F", dest="F", help="JSON file holding {\"q\": x} or {\"F\": [[[re, im], ...], ...]}")
    parser.add_argument("--precision", type=int, help="mpmath precision in bits (>= 64)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"))
    parser.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="app", description="Fusion, boundary and lemma checks for free unitary quantum groups")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("decompose", help="decompose x ⊗ y")
    _global_flags(p)
    p.add_argument("x")
    p.add_argument("y")

    p = sub.add_parser("verify", help="run verification suites")
    _global_flags(p)
    p.add_argument("--suite", action="append", choices=SUITE_ORDER + ["all"], help="repeatable; default all")
    p.add_argument("--n-max", type=int, help="largest n of the restricted-trace sweep")
    p.add_argument("--paths", type=int, help="Monte Carlo paths")
    p.add_argument("--samples", type=int, help="samples per matrix-lemma sweep")
    p.add_argument("--scan-depth", type=int, help="support scan length L")

    p = sub.add_parser("walk", help="Monte Carlo exit law of the tree walk")
    _global_flags(p)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--escape", type=int, default=60)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--start", default="e", help="start word")

    p = sub.add_parser("boundary", help="harmonic cylinder masses")
    _global_flags(p)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--ratio-offset", type=int, default=0, help="also tabulate dim_q(x,|x|+offset)/dim_q(|x|+offset)")

    p = sub.add_parser("gap", help="restricted level trace gaps")
    _global_flags(p)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--method", choices=("dp", "enumerate"), default="dp")

    p = sub.add_parser("lemmas", help="randomised operator-inequality checks")
    _global_flags(p)
    p.add_argument("--which", choices=tuple(LEMMA_ALIASES), required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--eps", type=float, action="append", help="repeatable; default 0.05 0.1 0.25 0.5")
    p.add_argument("--dim-max", type=int, default=8)
    p.add_argument("--theta", choices=sorted(THETAS), action="append")
    p.add_argument("--k", type=int, default=2)

    p = sub.add_parser("faithfulness", help="sandwich certificates and support scans")
    _global_flags(p)
    p.add_argument("--F-words", dest="f_words", default="u", help="comma-separated words")
    p.add_argument("--N-max", dest="n_max", type=int, default=8)
    p.add_argument("--L", dest="scan_depth", type=int)
    p.add_argument("--table", type=int, help="instead emit the least N for every word up to this length")

    return parser


# Configuration

def resolve_run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """
    Merge flags over settings.  Commands that need a context default to q = 1.

    Raises:
        ContextError: If both --q and --F are given
    """
    if args.q is not None and args.F is not None:
        raise ContextError("Give either --q or --F, not both")
    if args.F is not None:
        source = ContextSource.from_json_file(args.F)
    else:
        source = ContextSource(q=args.q if args.q is not None else 1.0)
    params = {k: v for k, v in vars(args).items()
              if k not in ("q", "F", "precision", "seed", "workers", "output_format", "out", "command")}
    return RunConfig(
        source=source,
        precision_bits=args.precision or settings.PRECISION_BITS,
        seed=args.seed if args.seed is not None else settings.SEED,
        workers=args.workers or settings.WORKERS,
        output_format=args.output_format or settings.OUTPUT_FORMAT,
        out=args.out,
        params=params,
    )


def build_context(config: RunConfig) -> Tuple[QContext, Optional[QSpectrum]]:
    if config.source.F is not None:
        return context_from_F(config.source.F, config.precision_bits)
    return context_from_q(config.source.q, config.precision_bits), None


# Output

def _json_scalar(value: Any) -> Any:
    """numpy scalars from DataFrame records"""
    return value.item() if hasattr(value, "item") else str(value)


def _cell(value: Any) -> Any:
    if isinstance(value, (mpmath.mpf, float)) and not isinstance(value, bool):
        return nstr(value)
    return value


def render_table(df: pd.DataFrame, config: RunConfig) -> str:
    """CSV or JSON records; reals as 20-digit strings, then the precision line"""
    df = df.map(_cell) if hasattr(df, "map") else df.applymap(_cell)
    if config.output_format == "json":
        rows = df.to_dict(orient="records")
        return json.dumps({"precision_bits": config.precision_bits, "rows": rows}, indent=2, default=_json_scalar) + "\n"
    return df.to_csv(index=False) + f"# precision_bits={config.precision_bits}\n"


def render_model(payload: Dict[str, Any], config: RunConfig) -> str:
    return json.dumps({**payload, "precision_bits": config.precision_bits}, indent=2, default=str) + "\n"


def emit(text: str, config: RunConfig) -> None:
    if config.out:
        with open(config.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# Commands

def cmd_decompose(config: RunConfig) -> int:
    x, y = parse_word(config.params["x"]), parse_word(config.params["y"])
    ctx, _ = build_context(config)
    decomposition = tensor_decompose(x, y)
    summands = sorted(decomposition, key=lambda w: (-len(w), w.bits))
    with mpmath.workprec(ctx.precision_bits):
        lhs = qdim_word(x, ctx) * qdim_word(y, ctx)
        rhs = mpmath.fsum(qdim_word(w, ctx) for w in summands)
    if config.output_format == "json":
        emit(render_model({
            "x": format_word(x), "y": format_word(y),
            "summands": [format_word(w) for w in summands],
            "dim_product": nstr(lhs), "dim_sum": nstr(rhs),
        }, config), config)
    else:
        lines = [
            ", ".join(format_word(w) for w in summands),
            f"dim_q({format_word(x)})*dim_q({format_word(y)}) = {nstr(lhs)} = {nstr(rhs)}",
            f"# precision_bits={config.precision_bits}",
        ]
        emit("\n".join(lines) + "\n", config)
    return EXIT_OK


def cmd_verify(config: RunConfig, settings: Settings) -> int:
    ctx, spectrum = build_context(config)
    p = config.params
    overrides = {}
    if p.get("n_max") is not None:
        overrides["n_max"] = p["n_max"]
    if p.get("paths") is not None:
        overrides["paths"] = p["paths"]
    if p.get("samples") is not None:
        overrides["samples"] = overrides["theta_samples"] = p["samples"]
    if p.get("scan_depth") is not None:
        overrides["scan_depth"] = p["scan_depth"]
    verifier = Verifier(
        ctx, spectrum, margin=settings.MARGIN, matrix_margin=settings.MATRIX_MARGIN,
        seed=config.seed, workers=config.workers, params=overrides,
    )
    report = verifier.run(p.get("suite") or ["all"])
    emit(report.model_dump_json(indent=2) + "\n", config)
    if not report.passed:
        raise VerificationFailure(f"{len(report.failures())} check(s) failed", report)
    return EXIT_OK


def cmd_walk(config: RunConfig, settings: Settings) -> int:
    ctx, _ = build_context(config)
    p = config.params
    cfg = WalkConfig(
        seed=config.seed, n_paths=p["paths"], escape_level=p["escape"], record_depth=p["depth"],
        workers=config.workers, step_cap=settings.WALK_STEP_CAP,
    )
    estimate = monte_carlo_hitting(cfg, ctx, start=parse_word(p["start"]))
    emit(render_table(hitting_table(estimate), config), config)
    logger.info("Walk done: completed=%d failures=%d root_returns=%d", estimate.completed, estimate.failures, estimate.root_returns)
    return EXIT_OK


def cmd_boundary(config: RunConfig, settings: Settings) -> int:
    ctx, _ = build_context(config)
    p = config.params
    measure = build_cylinder_measure(p["depth"], ctx, max_depth=settings.MAX_CYLINDER_DEPTH, workers=config.workers)
    table = cylinder_table(measure, ctx, settings.MARGIN)
    if p.get("ratio_offset"):
        table["ratio"] = [
            dimq_ratio_limit(parse_word(w), len(parse_word(w)) + max(p["ratio_offset"], 2), ctx)
            for w in table["word"]
        ]
    emit(render_table(table, config), config)
    return EXIT_OK


def cmd_gap(config: RunConfig, settings: Settings) -> int:
    ctx, _ = build_context(config)
    p = config.params
    table = gap_table(p["n_max"], ctx, method=p["method"], margin=settings.MARGIN, workers=config.workers)
    emit(render_table(table, config), config)
    return EXIT_OK if table["pass"].astype(bool).all() else EXIT_VERIFICATION_FAILED


def cmd_lemmas(config: RunConfig, settings: Settings) -> int:
    p = config.params
    margin = settings.MATRIX_MARGIN
    which = LEMMA_ALIASES[p["which"]]
    if which == "asymptotic":
        results = [
            asymptotic_orthogonality_sweep(eps, p["samples"], config.seed, p["dim_max"], margin, config.workers)
            for eps in (p.get("eps") or [0.05, 0.1, 0.25, 0.5])
        ]
    elif which == "easy":
        results = [easy_orthogonality_sweep(p["samples"], config.seed, p["dim_max"], margin, config.workers)]
    else:
        results = [
            theta_rotation_probe(THETAS[label], p["k"], p["samples"], config.seed, margin=margin, workers=config.workers)
            for label in (p.get("theta") or sorted(THETAS))
        ]
    emit(render_model({"results": [r.model_dump() for r in results]}, config), config)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFICATION_FAILED


def cmd_faithfulness(config: RunConfig, settings: Settings) -> int:
    p = config.params
    if p.get("table"):
        emit(render_table(min_N_table(p["table"], p["n_max"]), config), config)
        return EXIT_OK

    words = [parse_word(w.strip()) for w in p["f_words"].split(",") if w.strip()]
    result = banica_min_N(words, p["n_max"])
    payload: Dict[str, Any] = {"certificate": result.model_dump()}
    ok = isinstance(result, SandwichCertificate) and result.reverified
    if isinstance(result, SandwichCertificate):
        depth = p.get("scan_depth") or settings.SCAN_DEPTH
        report = disjoint_support_check(words, result.N, depth, workers=config.workers)
        norm = strong_faithfulness_witness_norm(words, N=result.N, L=depth, workers=config.workers)
        payload["support"] = {
            "N": report.N, "L": report.L, "setA_size": len(report.setA), "setB_size": len(report.setB),
            "disjoint": report.disjoint, "violations": [v.model_dump() for v in report.violations],
        }
        payload["witness_norm"] = norm.value
        ok = ok and report.disjoint
    emit(render_model(payload, config), config)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


COMMANDS: Dict[str, Callable[..., int]] = {
    "verify": cmd_verify,
    "walk": cmd_walk,
    "boundary": cmd_boundary,
    "gap": cmd_gap,
    "lemmas": cmd_lemmas,
    "faithfulness": cmd_faithfulness,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = get_settings()
        configure_logging(settings)
        args = build_parser().parse_args(argv)
        config = resolve_run_config(args, settings)
        if args.command == "decompose":
            return cmd_decompose(config)
        return COMMANDS[args.command](config, settings)
    except VerificationFailure as e:
        logger.error("Verification failed: %s", e)
        return EXIT_VERIFICATION_FAILED
    except (ToolkitError, ValidationError, ValueError) as e:
        logger.error("Configuration error: %s", e)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
