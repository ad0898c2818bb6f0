"""
API Routes – /solve, /verify, /aux/dot, /oracle, /params, /health
"""

from __future__ import annotations

from typing import Annotated, Optional

from fastapi import APIRouter, File, Form, HTTPException, Query, UploadFile
from fastapi.responses import PlainTextResponse

from app.core.config import DEFAULT_EPSILON, DEFAULT_SEARCH_BUDGET, DEFAULT_SEED
from app.core.errors import PipelineInvariantError, TwoFactorError
from app.models.schemas import (
    OracleReport,
    PipelineConfig,
    RunReport,
    TheoreticalParams,
    VerifyResult,
)
from app.services import json_formatter
from app.services.aux_graph import build_auxiliary
from app.services.dot_export import aux_to_dot
from app.services.graph_core import verify_cycle_listing
from app.services.graph_parser import (
    load_instance,
    parse_factor_file,
    parse_graph_document,
    parse_hamilton_flag,
    read_upload,
)
from app.services.oracle import brute_force_two_factors
from app.services.pipeline import solve, theoretical_params

router = APIRouter()


def _instance(upload: UploadFile, hamilton: Optional[str]):
    document = parse_graph_document(read_upload(upload.file))
    flag = parse_hamilton_flag(hamilton) if hamilton else None
    return load_instance(document, flag)


@router.post(
    "/solve",
    response_model=RunReport,
    summary="Find a 2-factor with exactly k cycles",
    description=(
        "Upload a graph file (header 'n m', optional 'H:' line, one edge per line). "
        "Runs the auxiliary-graph pipeline and returns the full run report; "
        "status 'search_failure' is a normal outcome, not an HTTP error."
    ),
    responses={
        200: {"description": "Run report"},
        400: {"description": "Invalid graph file or parameters"},
    },
)
async def solve_graph(
    file: Annotated[UploadFile, File(description="Graph file")],
    k: Annotated[int, Form(ge=1)],
    epsilon: Annotated[float, Form()] = DEFAULT_EPSILON,
    seed: Annotated[int, Form()] = DEFAULT_SEED,
    budget: Annotated[int, Form(ge=1)] = DEFAULT_SEARCH_BUDGET,
    fallback: Annotated[bool, Form()] = True,
    hamilton: Annotated[Optional[str], Form()] = None,
) -> RunReport:
    """
    POST /solve
    ───────────
    Multipart upload with field ``file`` plus form fields ``k`` and friends.
    """
    try:
        instance = _instance(file, hamilton)
        config = PipelineConfig(
            target_k=k,
            epsilon=epsilon,
            seed=seed,
            search_budget=budget,
            fallback_enabled=fallback,
        )
        _, report = solve(instance, config)
    except PipelineInvariantError as exc:
        raise HTTPException(status_code=500, detail=f"internal invariant violated: {exc}") from exc
    except TwoFactorError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return report


@router.post(
    "/verify",
    response_model=VerifyResult,
    summary="Verify a listed 2-factor against a graph",
)
async def verify_factor(
    file: Annotated[UploadFile, File(description="Graph file")],
    factor: Annotated[UploadFile, File(description="Factor file, one cycle per line")],
) -> VerifyResult:
    try:
        document = parse_graph_document(read_upload(file.file))
        cycles = parse_factor_file(read_upload(factor.file))
    except TwoFactorError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    try:
        tf = verify_cycle_listing(document.graph, cycles)
    except TwoFactorError as exc:
        return VerifyResult(valid=False, error=str(exc))
    return VerifyResult(valid=True, components=tf.component_count)


@router.post(
    "/aux/dot",
    response_class=PlainTextResponse,
    summary="Auxiliary graph A(G,H) as Graphviz DOT",
)
async def aux_dot(
    file: Annotated[UploadFile, File(description="Graph file")],
    hamilton: Annotated[Optional[str], Form()] = None,
) -> PlainTextResponse:
    try:
        aux = build_auxiliary(_instance(file, hamilton))
    except TwoFactorError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return PlainTextResponse(aux_to_dot(aux), media_type="text/vnd.graphviz")


@router.post(
    "/oracle",
    response_model=OracleReport,
    summary="Exact achievable cycle counts on a small graph",
)
async def oracle(
    file: Annotated[UploadFile, File(description="Graph file")],
) -> OracleReport:
    try:
        document = parse_graph_document(read_upload(file.file))
        result = brute_force_two_factors(document.graph)
    except TwoFactorError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return json_formatter.oracle_report(result)


@router.get(
    "/params",
    response_model=TheoreticalParams,
    summary="Theoretical constants L, K, N and blow-up sizes",
)
async def params(
    epsilon: Annotated[float, Query()],
    k: Annotated[int, Query(ge=1)],
    n: Annotated[Optional[int], Query(ge=3)] = None,
) -> TheoreticalParams:
    try:
        return theoretical_params(epsilon, k, n)
    except TwoFactorError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@router.get(
    "/health",
    summary="Health check endpoint",
)
async def health_check():
    """
    GET /health
    ───────────
    Simple health check to verify the service is running.
    """
    return {
        "status": "healthy",
        "service": "twofactor",
        "version": "1.0.0",
    }
