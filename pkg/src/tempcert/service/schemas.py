"""Pydantic request/response models for the service; they mirror the JSON
file formats owned by the core package (complex numbers as [re, im])."""

from __future__ import annotations

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field

from ..certify import CertificationReport, CertifyTolerances
from ..inequalities import EvaluationReport, Inequality
from ..model import Realization, realization_from_dict

Pair = Annotated[list[float], Field(min_length=2, max_length=2)]


class RealizationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=3)
    dim: int = Field(ge=1)
    state: list[Pair]
    observables: dict[str, list[list[Pair]]]
    provenance: Literal["exact", "float"] = "exact"

    def to_core(self) -> Realization:
        return realization_from_dict(self.model_dump())

    @classmethod
    def from_core(cls, real: Realization) -> "RealizationModel":
        return cls.model_validate(real.to_dict())


class InequalityTermModel(BaseModel):
    coeff: int
    labels: list[str]
    cover: list[list[str]]


class InequalityModel(BaseModel):
    n: int = Field(ge=3)
    flavor: Literal["temporal", "noncontextual"]
    classical_bound: int
    quantum_bound: int
    alpha: int
    terms: list[InequalityTermModel]

    @classmethod
    def from_core(cls, ineq: Inequality) -> "InequalityModel":
        return cls.model_validate(ineq.to_dict())


class BoundsResponse(BaseModel):
    n: int
    alpha: int
    eta_C: int
    eta_Q: int
    label_count: int
    brute_force: int | None = None
    brute_force_agrees: bool | None = None
    brute_force_note: str | None = None


class TermValueModel(BaseModel):
    coeff: int
    labels: list[str]
    value: float
    cover_size: int


class EvaluationReportModel(BaseModel):
    n: int
    flavor: str
    eta_C: int
    eta_Q: int
    total: float
    deficit: float
    violated: bool
    ordering_spread: float | None
    terms: list[TermValueModel]

    @classmethod
    def from_core(cls, report: EvaluationReport) -> "EvaluationReportModel":
        return cls.model_validate(report.to_dict())


class EvaluateRequest(BaseModel):
    realization: RealizationModel
    inequality: InequalityModel | None = None
    n: int | None = Field(default=None, ge=3)
    flavor: Literal["temporal", "noncontextual"] = "temporal"
    workers: int = Field(default=1, ge=1)


class TolerancesModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    relation: float | None = None
    algebra: float | None = None
    rank: float | None = None
    invariance: float | None = None
    hatted: float | None = None
    unitary: float | None = None
    equivalence: float | None = None
    fidelity: float | None = None
    observable: float | None = None

    def to_core(self, provenance: str) -> CertifyTolerances:
        base = CertifyTolerances.for_provenance(provenance)
        overrides = {k: v for k, v in self.model_dump().items() if v is not None}
        return CertifyTolerances(**{**base.__dict__, **overrides})


class CertifyRequest(BaseModel):
    realization: RealizationModel
    tolerances: TolerancesModel | None = None
    workers: int = Field(default=1, ge=1)


class CertificationReportModel(BaseModel):
    n: int
    Tn_value: float
    eta_C: int
    eta_Q: int
    relation_residuals: dict[str, float] | None
    algebra_residuals: dict[str, float] | None
    subspace_dim: int | None
    subspace_singular_values: list[float] | None
    invariance_residual: float | None
    hatted_residuals: dict[str, float] | None
    aproduct_angle: float | None
    nij_signs: dict[str, int] | None
    nij_residuals: dict[str, float] | None
    unitary_residuals: dict[str, float] | None
    fidelity: float | None
    verdict: Literal["pass", "fail"]
    failed_checks: list[str]
    tolerances: dict[str, float]

    @classmethod
    def from_core(cls, report: CertificationReport) -> "CertificationReportModel":
        return cls.model_validate(report.to_dict())


class ManifestEntryModel(BaseModel):
    file: str
    kind: Literal["canonical", "embedded", "perturbed", "classical"]
    n: int
    dim: int
    expected_total: float


class ManifestModel(BaseModel):
    seed: int
    embed_extra_dim: int
    perturb_epsilon: float
    entries: list[ManifestEntryModel]


class FixturesResponse(BaseModel):
    seed: int
    files: dict[str, RealizationModel]
    manifest: ManifestModel


class ErrorBody(BaseModel):
    code: str
    detail: str


class ErrorResponse(BaseModel):
    error: ErrorBody
