"""
Free Unitary Boundary Toolkit - HTTP Service Module

This module exposes the toolkit over FastAPI, handling:
1. Fusion decompositions and quantum dimensions
2. Harmonic cylinder masses
3. Restricted level trace gaps
4. Verification suites

Errors raised by the toolkit map to HTTP 400, failing verification runs to
HTTP 422 with the report attached, anything else to HTTP 500.

Environment variables are managed through .env file and Settings class.
"""

import logging
from datetime import datetime
from typing import Dict

import mpmath
from fastapi import Depends, FastAPI, HTTPException, Query, status
from fastapi.middleware.cors import CORSMiddleware

from .boundary import harmonic_cylinder_mass
from .central_traces import restricted_trace_gap
from .config import Settings, get_settings
from .exceptions import ToolkitError
from .fusion import format_word, parse_word, tensor_decompose
from .logging_config import configure_logging, metrics_logger
from .models import QContext, VerifyRequest, nstr
from .qarith import context_from_F, context_from_q, qdim_word
from .verification import Verifier

logger = logging.getLogger(__name__)

# Initialize FastAPI application with metadata
app = FastAPI(
    title="Free Unitary Boundary Toolkit",
    description="Fusion calculus, boundary measures and lemma checks for free unitary quantum groups",
    version="1.0.0",
    docs_url="/api/docs",
    redoc_url="/api/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=False,
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)


def _context(q: float, settings: Settings) -> QContext:
    return context_from_q(q, settings.PRECISION_BITS)


@app.on_event("startup")
async def startup_event():
    """Configure logging and check that the default context builds"""
    settings = get_settings()
    configure_logging(settings)
    logger.info("Starting %s (%s)", settings.APP_NAME, settings.ENVIRONMENT)
    try:
        _context(1.0, settings)
        logger.info("Application startup completed successfully")
    except Exception as e:
        logger.critical(f"Application startup failed: {str(e)}")
        raise


@app.get("/", status_code=status.HTTP_200_OK)
async def root(settings: Settings = Depends(get_settings)):
    """
    Health check and basic service information.

    Returns:
        dict: Service status, name and working precision
    """
    logger.debug("Health check request received")
    return {
        "status": "healthy",
        "service": settings.APP_NAME,
        "precision_bits": settings.PRECISION_BITS,
        "timestamp": datetime.utcnow().isoformat(),
        "version": "1.0.0",
    }


@app.get("/fusion/decompose", status_code=status.HTTP_200_OK)
async def decompose(
    x: str = Query(..., description="word over u/b, e for empty"),
    y: str = Query(...),
    q: float = Query(1.0, gt=0, le=1),
    settings: Settings = Depends(get_settings),
) -> Dict:
    """
    Decompose x ⊗ y and check multiplicativity of dim_q.

    Raises:
        HTTPException: 400 if a word is malformed
    """
    try:
        left, right = parse_word(x), parse_word(y)
        ctx = _context(q, settings)
        summands = sorted(tensor_decompose(left, right), key=lambda w: (-len(w), w.bits))
        with mpmath.workprec(ctx.precision_bits):
            product = qdim_word(left, ctx) * qdim_word(right, ctx)
            total = mpmath.fsum(qdim_word(w, ctx) for w in summands)
        metrics_logger.info("DECOMPOSE|%s|%s|%d", x, y, len(summands))
        return {
            "x": format_word(left),
            "y": format_word(right),
            "summands": [format_word(w) for w in summands],
            "dim_product": nstr(product),
            "dim_sum": nstr(total),
        }
    except ToolkitError as e:
        logger.warning(f"Bad decompose request: {str(e)}")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@app.get("/qdim", status_code=status.HTTP_200_OK)
async def qdim(
    word: str = Query(...),
    q: float = Query(1.0, gt=0, le=1),
    settings: Settings = Depends(get_settings),
) -> Dict:
    """Quantum dimension dim_q(word)"""
    try:
        w = parse_word(word)
        ctx = _context(q, settings)
        return {"word": format_word(w), "q": nstr(ctx.q), "dim_q": nstr(qdim_word(w, ctx))}
    except ToolkitError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@app.get("/boundary/cylinder", status_code=status.HTTP_200_OK)
async def cylinder(
    word: str = Query(...),
    q: float = Query(1.0, gt=0, le=1),
    settings: Settings = Depends(get_settings),
) -> Dict:
    """Harmonic mass of the cylinder ∂I(word)"""
    try:
        w = parse_word(word)
        ctx = _context(q, settings)
        return {"word": format_word(w), "q": nstr(ctx.q), "mass": nstr(harmonic_cylinder_mass(w, ctx))}
    except ToolkitError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@app.get("/traces/gap", status_code=status.HTTP_200_OK)
async def trace_gap(
    n: int = Query(..., ge=2, le=64),
    p: int = Query(..., ge=1),
    k: int = Query(..., ge=1),
    q: float = Query(1.0, gt=0, le=1),
    settings: Settings = Depends(get_settings),
) -> Dict:
    """
    ‖qtr_n - qtr_n^{(p,k)}‖ by the block DP, with the bound 2^{-k}

    Raises:
        HTTPException: 400 unless n ≥ p + k
    """
    try:
        ctx = _context(q, settings)
        gap = restricted_trace_gap(n, p, k, ctx)
        bound = mpmath.mpf(2) ** -k
        return {"n": n, "p": p, "k": k, "gap": nstr(gap), "bound": nstr(bound), "pass": bool(gap <= bound)}
    except ToolkitError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@app.post("/verify", status_code=status.HTTP_200_OK)
async def verify(request: VerifyRequest, settings: Settings = Depends(get_settings)) -> Dict:
    """
    Run verification suites.

    Returns:
        Dict: The verification report

    Raises:
        HTTPException: 400 on configuration errors, 422 with the report if a check fails
    """
    logger.info("Verification request: suites=%s", request.suites)
    try:
        precision = request.precision_bits or settings.PRECISION_BITS
        if request.source.F is not None:
            ctx, spectrum = context_from_F(request.source.F, precision)
        else:
            ctx, spectrum = context_from_q(request.source.q, precision), None
        verifier = Verifier(
            ctx, spectrum, margin=settings.MARGIN, matrix_margin=settings.MATRIX_MARGIN,
            seed=request.seed if request.seed is not None else settings.SEED,
            workers=settings.WORKERS, params=request.params,
        )
        report = verifier.run(request.suites)
    except ToolkitError as e:
        logger.warning(f"Bad verification request: {str(e)}")
        metrics_logger.info("VERIFY_REQUEST|%s|%s", ",".join(request.suites), "rejected")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    except Exception as e:
        logger.error(f"Verification crashed: {str(e)}")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail="Verification failed to run")

    payload = report.model_dump(mode="json")
    payload["passed"] = report.passed
    metrics_logger.info("VERIFY_REQUEST|%s|%s", ",".join(request.suites), "passed" if report.passed else "failed")
    if not report.passed:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=payload)
    return payload


if __name__ == "__main__":
    import uvicorn

    settings = get_settings()
    uvicorn.run("app.main:app", host=settings.APP_HOST, port=settings.APP_PORT, reload=settings.is_development)
