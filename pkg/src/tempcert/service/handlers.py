"""Service handlers: the single execution layer behind both the HTTP
routes and the in-process CLI client.  Structural problems are reported as
ServiceError with a stable code the CLI maps to exit codes."""

from __future__ import annotations

from math import comb

from ..certify import certify
from ..errors import MissingObservableError, ObservableValidationError, SchemaError
from ..fixtures import DEFAULT_SEED, FIXTURE_NS, generate_fixtures
from ..inequalities import (
    Inequality,
    MAX_BRUTEFORCE_LABELS,
    bound_formulas,
    build_in,
    build_tn,
    classical_bound_bruteforce,
    evaluate,
    inequality_from_dict,
)
from ..model import required_labels
from .schemas import (
    BoundsResponse,
    CertificationReportModel,
    CertifyRequest,
    EvaluateRequest,
    EvaluationReportModel,
    FixturesResponse,
    InequalityModel,
    ManifestModel,
    RealizationModel,
)

# exit codes the CLI maps each code to
EXIT_CODES = {"invalid_n": 2, "schema": 3, "validation": 4, "io": 5, "internal": 1}
HTTP_STATUS = {"invalid_n": 422, "schema": 422, "validation": 400, "io": 500, "internal": 500}


class ServiceError(Exception):
    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail

    @property
    def exit_code(self) -> int:
        return EXIT_CODES.get(self.code, 1)

    @property
    def http_status(self) -> int:
        return HTTP_STATUS.get(self.code, 500)


def get_bounds(n: int, workers: int = 1) -> BoundsResponse:
    if n < 3:
        raise ServiceError("invalid_n", f"n must be >= 3, got {n}")
    eta_c, eta_q, alpha = bound_formulas(n)
    label_count = 2 * n + comb(n, 2)
    brute = agrees = None
    note = None
    if label_count <= MAX_BRUTEFORCE_LABELS:
        brute = classical_bound_bruteforce(build_tn(n), workers=workers)
        agrees = brute == eta_c
    else:
        note = (
            f"brute force skipped: {label_count} labels exceed the guard "
            f"{MAX_BRUTEFORCE_LABELS}"
        )
    return BoundsResponse(
        n=n,
        alpha=alpha,
        eta_C=eta_c,
        eta_Q=eta_q,
        label_count=label_count,
        brute_force=brute,
        brute_force_agrees=agrees,
        brute_force_note=note,
    )


def build_inequality(n: int, flavor: str) -> InequalityModel:
    builder = build_tn if flavor == "temporal" else build_in
    try:
        ineq = builder(n)
    except ValueError as exc:
        raise ServiceError("invalid_n", str(exc)) from None
    return InequalityModel.from_core(ineq)


def _core_inequality(req: EvaluateRequest) -> Inequality:
    if req.inequality is not None:
        try:
            return inequality_from_dict(req.inequality.model_dump())
        except SchemaError as exc:
            raise ServiceError("schema", str(exc)) from None
    n = req.n if req.n is not None else req.realization.n
    builder = build_tn if req.flavor == "temporal" else build_in
    try:
        return builder(n)
    except ValueError as exc:
        raise ServiceError("invalid_n", str(exc)) from None


def _core_realization(model: RealizationModel, tol: float = 1e-8):
    try:
        real = model.to_core()
    except SchemaError as exc:
        raise ServiceError("schema", str(exc)) from None
    try:
        real.validate(1e-6 if real.provenance == "float" else tol)
    except ObservableValidationError as exc:
        raise ServiceError("validation", str(exc)) from None
    except ValueError as exc:
        raise ServiceError("validation", str(exc)) from None
    return real


def run_evaluate(req: EvaluateRequest) -> EvaluationReportModel:
    ineq = _core_inequality(req)
    real = _core_realization(req.realization)
    try:
        report = evaluate(ineq, real, workers=req.workers)
    except MissingObservableError as exc:
        raise ServiceError("schema", f"realization lacks observable {exc.args[0]}") from None
    return EvaluationReportModel.from_core(report)


def run_certify(req: CertifyRequest) -> CertificationReportModel:
    real = _core_realization(req.realization)
    try:
        real.require(required_labels(real.n))
    except MissingObservableError as exc:
        raise ServiceError("schema", f"realization lacks observable {exc.args[0]}") from None
    tolerances = None
    if req.tolerances is not None:
        tolerances = req.tolerances.to_core(real.provenance)
    try:
        report = certify(real, tolerances=tolerances, workers=req.workers)
    except ObservableValidationError as exc:
        raise ServiceError("validation", str(exc)) from None
    return CertificationReportModel.from_core(report)


def build_fixture_bundle(seed: int = DEFAULT_SEED, ns=FIXTURE_NS) -> FixturesResponse:
    bad = [n for n in ns if n < 3]
    if bad:
        raise ServiceError("invalid_n", f"fixture n values must be >= 3, got {bad}")
    files, manifest = generate_fixtures(seed=seed, ns=tuple(ns))
    return FixturesResponse(
        seed=seed,
        files={name: RealizationModel.model_validate(payload) for name, payload in files.items()},
        manifest=ManifestModel.model_validate(manifest),
    )
