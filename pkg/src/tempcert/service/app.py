"""FastAPI application wrapping the toolkit."""

from __future__ import annotations

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from .. import __version__
from . import handlers
from .handlers import ServiceError
from .schemas import (
    BoundsResponse,
    CertificationReportModel,
    CertifyRequest,
    EvaluateRequest,
    EvaluationReportModel,
    ErrorResponse,
    FixturesResponse,
    InequalityModel,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="tempcert",
        version=__version__,
        description=(
            "Temporal inequalities for n-qubit complete-graph states: bounds, "
            "evaluation on uploaded realizations, and self-testing certification."
        ),
    )

    @app.exception_handler(ServiceError)
    async def service_error_handler(_, exc: ServiceError):
        body = ErrorResponse.model_validate({"error": {"code": exc.code, "detail": exc.detail}})
        return JSONResponse(status_code=exc.http_status, content=body.model_dump())

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/bounds/{n}", response_model=BoundsResponse)
    def bounds(n: int, workers: int = Query(default=1, ge=1)) -> BoundsResponse:
        return handlers.get_bounds(n, workers=workers)

    @app.get("/inequality/{flavor}/{n}", response_model=InequalityModel)
    def inequality(flavor: str, n: int) -> InequalityModel:
        if flavor not in ("temporal", "noncontextual"):
            raise ServiceError("schema", f"unknown flavor {flavor!r}")
        return handlers.build_inequality(n, flavor)

    @app.post("/evaluate", response_model=EvaluationReportModel)
    def evaluate_endpoint(req: EvaluateRequest) -> EvaluationReportModel:
        return handlers.run_evaluate(req)

    @app.post("/certify", response_model=CertificationReportModel)
    def certify_endpoint(req: CertifyRequest) -> CertificationReportModel:
        return handlers.run_certify(req)

    @app.get("/fixtures", response_model=FixturesResponse)
    def fixtures(
        seed: int = Query(default=handlers.DEFAULT_SEED),
        ns: str = Query(default="3,4,5", pattern=r"^\d+(,\d+)*$"),
    ) -> FixturesResponse:
        values = tuple(int(x) for x in ns.split(","))
        return handlers.build_fixture_bundle(seed=seed, ns=values)

    return app
