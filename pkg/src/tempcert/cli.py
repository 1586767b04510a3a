"""Command-line client for the toolkit.

The CLI is a thin client of the service layer: every command builds a
request model, executes it (in process by default, or against a running
service with --server), and formats the response.  Violation of an
inequality is data, never an error; exit codes flag structural problems
only, plus certify's pass/fail contract:

    0  success (certify: pass)      3  input does not match the schema
    1  certify: fail                4  observable validation failed
    2  invalid n / bad usage        5  file I/O error
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import pydantic

from . import __version__
from .fixtures import DEFAULT_SEED
from .service import handlers
from .service.handlers import ServiceError
from .service.schemas import (
    BoundsResponse,
    CertificationReportModel,
    CertifyRequest,
    EvaluateRequest,
    EvaluationReportModel,
    FixturesResponse,
    InequalityModel,
    RealizationModel,
    TolerancesModel,
)

EXIT_CERTIFY_FAIL = 1
EXIT_INVALID_N = 2
EXIT_SCHEMA = 3
EXIT_VALIDATION = 4
EXIT_IO = 5


class RemoteClient:
    """Executes requests over HTTP against a --server instance."""

    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def _request(self, method: str, path: str, **kwargs):
        import httpx

        try:
            resp = httpx.request(method, self.base_url + path, timeout=600.0, **kwargs)
        except httpx.HTTPError as exc:
            raise ServiceError("io", f"cannot reach {self.base_url}: {exc}") from None
        if resp.status_code >= 400:
            try:
                payload = resp.json()
            except ValueError:
                payload = {}
            if "error" in payload:
                raise ServiceError(payload["error"]["code"], payload["error"]["detail"])
            # fastapi's own request validation → schema problem
            raise ServiceError("schema", json.dumps(payload.get("detail", resp.text)))
        return resp.json()

    def bounds(self, n: int, workers: int) -> BoundsResponse:
        return BoundsResponse.model_validate(self._request("GET", f"/bounds/{n}", params={"workers": workers}))

    def inequality(self, n: int, flavor: str) -> InequalityModel:
        return InequalityModel.model_validate(self._request("GET", f"/inequality/{flavor}/{n}"))

    def evaluate(self, req: EvaluateRequest) -> EvaluationReportModel:
        return EvaluationReportModel.model_validate(
            self._request("POST", "/evaluate", json=req.model_dump())
        )

    def certify(self, req: CertifyRequest) -> CertificationReportModel:
        return CertificationReportModel.model_validate(
            self._request("POST", "/certify", json=req.model_dump())
        )

    def fixtures(self, seed: int, ns) -> FixturesResponse:
        return FixturesResponse.model_validate(
            self._request("GET", "/fixtures", params={"seed": seed, "ns": ",".join(map(str, ns))})
        )


class LocalClient:
    """Runs the same handlers in process."""

    def bounds(self, n: int, workers: int) -> BoundsResponse:
        return handlers.get_bounds(n, workers=workers)

    def inequality(self, n: int, flavor: str) -> InequalityModel:
        return handlers.build_inequality(n, flavor)

    def evaluate(self, req: EvaluateRequest) -> EvaluationReportModel:
        return handlers.run_evaluate(req)

    def certify(self, req: CertifyRequest) -> CertificationReportModel:
        return handlers.run_certify(req)

    def fixtures(self, seed: int, ns) -> FixturesResponse:
        return handlers.build_fixture_bundle(seed=seed, ns=tuple(ns))


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ServiceError("io", f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ServiceError("schema", f"{path} is not valid JSON: {exc}") from None


def _load_realization(path: str) -> RealizationModel:
    try:
        return RealizationModel.model_validate(_load_json(path))
    except pydantic.ValidationError as exc:
        raise ServiceError("schema", f"{path}: {exc.errors()[0]['msg']} at {exc.errors()[0]['loc']}") from None


def _dump(payload: dict, fmt: str, table: str, output: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) if fmt == "json" else table
    if output:
        try:
            Path(output).write_text(text + "\n")
        except OSError as exc:
            raise ServiceError("io", f"cannot write {output}: {exc}") from None
    else:
        print(text)


def _bounds_table(r: BoundsResponse) -> str:
    lines = [
        f"n            {r.n}",
        f"alpha        {r.alpha}",
        f"eta_C        {r.eta_C}",
        f"eta_Q        {r.eta_Q}",
        f"labels       {r.label_count}",
    ]
    if r.brute_force is not None:
        verdict = "agrees" if r.brute_force_agrees else "DISAGREES"
        lines.append(f"brute force  {r.brute_force} ({verdict})")
    else:
        lines.append(f"brute force  skipped ({r.brute_force_note})")
    return "\n".join(lines)


def _evaluate_table(r: EvaluationReportModel) -> str:
    lines = [
        f"inequality   {r.flavor} n={r.n}",
        f"total        {r.total:+.12f}",
        f"eta_C        {r.eta_C}",
        f"eta_Q        {r.eta_Q}",
        f"deficit      {r.deficit:+.3e}",
        f"violated     {str(r.violated).lower()}",
    ]
    if r.ordering_spread is not None:
        lines.append(f"ordering spread  {r.ordering_spread:.3e}")
    lines.append("")
    lines.append(f"{'coeff':>6}  {'value':>18}  {'cover':>5}  labels")
    for t in r.terms:
        lines.append(f"{t.coeff:>+6}  {t.value:>+18.12f}  {t.cover_size:>5}  {' '.join(t.labels)}")
    return "\n".join(lines)


def _certify_table(r: CertificationReportModel) -> str:
    def worst(d):
        return "-" if not d else f"{max(d.values()):.3e}"

    lines = [
        f"verdict      {r.verdict.upper()}",
        f"T_n value    {r.Tn_value:+.12f}  (eta_C {r.eta_C}, eta_Q {r.eta_Q})",
        f"relations    worst {worst(r.relation_residuals or {})}",
        f"algebra      worst {worst(r.algebra_residuals or {})}",
        f"subspace     dim {r.subspace_dim}",
        f"hatted       worst {worst(r.hatted_residuals or {})}",
        f"nij signs    {r.nij_signs}",
        f"fidelity     {r.fidelity}",
    ]
    if r.failed_checks:
        lines.append("failed checks:")
        lines.extend(f"  - {c}" for c in r.failed_checks)
    return "\n".join(lines)


def _make_client(args) -> LocalClient | RemoteClient:
    return RemoteClient(args.server) if args.server else LocalClient()


def _cmd_bounds(args) -> int:
    r = _make_client(args).bounds(args.n, args.workers)
    _dump(r.model_dump(), args.format, _bounds_table(r), args.output)
    return 0


def _cmd_build(args) -> int:
    r = _make_client(args).inequality(args.n, args.flavor)
    table = json.dumps(r.model_dump(), indent=2, sort_keys=True)  # no table form for raw inequalities
    _dump(r.model_dump(), args.format, table, args.output)
    return 0


def _cmd_evaluate(args) -> int:
    realization = _load_realization(args.input)
    inequality = None
    if args.inequality:
        try:
            inequality = InequalityModel.model_validate(_load_json(args.inequality))
        except pydantic.ValidationError as exc:
            raise ServiceError("schema", f"{args.inequality}: {exc.errors()[0]['msg']}") from None
    req = EvaluateRequest(
        realization=realization,
        inequality=inequality,
        n=args.n,
        flavor=args.flavor,
        workers=args.workers,
    )
    r = _make_client(args).evaluate(req)
    _dump(r.model_dump(), args.format, _evaluate_table(r), args.output)
    return 0


def _cmd_certify(args) -> int:
    realization = _load_realization(args.input)
    overrides = {}
    if args.tol_relation is not None:
        overrides["relation"] = args.tol_relation
        overrides["algebra"] = args.tol_relation
    if args.tol_rank is not None:
        overrides["rank"] = args.tol_rank
    req = CertifyRequest(
        realization=realization,
        tolerances=TolerancesModel(**overrides) if overrides else None,
        workers=args.workers,
    )
    r = _make_client(args).certify(req)
    _dump(r.model_dump(), args.format, _certify_table(r), args.output)
    if r.verdict != "pass":
        print("certification failed; see failed_checks", file=sys.stderr)
        return EXIT_CERTIFY_FAIL
    return 0


def _cmd_fixtures(args) -> int:
    bundle = _make_client(args).fixtures(args.seed, args.n or (3, 4, 5))
    out = Path(args.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, model in bundle.files.items():
            (out / name).write_text(json.dumps(model.model_dump(), indent=2, sort_keys=True) + "\n")
        (out / "manifest.json").write_text(
            json.dumps(bundle.manifest.model_dump(), indent=2, sort_keys=True) + "\n"
        )
    except OSError as exc:
        raise ServiceError("io", f"cannot write fixtures to {out}: {exc}") from None
    print(f"wrote {len(bundle.files)} fixtures + manifest.json to {out}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempcert",
        description="Temporal inequalities for complete-graph states: bounds, evaluation, certification.",
    )
    parser.add_argument("--version", action="version", version=f"tempcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--server", help="execute against a running service instead of in process")
        p.add_argument("--format", choices=("json", "table"), default="table")
        p.add_argument("--workers", type=int, default=1, help="data-parallel workers (result-invariant)")
        if output:
            p.add_argument("--output", help="write the report here instead of stdout")

    p = sub.add_parser("bounds", help="classical/quantum bounds, brute-force confirmed when feasible")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("build", help="build and export an inequality as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--flavor", choices=("temporal", "noncontextual"), default="temporal")
    common(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("evaluate", help="evaluate an inequality on a realization file")
    p.add_argument("--input", required=True, help="realization JSON file")
    p.add_argument("--n", type=int, help="use the built-in inequality for this n (default: realization's n)")
    p.add_argument("--flavor", choices=("temporal", "noncontextual"), default="temporal")
    p.add_argument("--inequality", help="inequality JSON file (overrides --n/--flavor)")
    common(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("certify", help="run the certification pipeline on a realization file")
    p.add_argument("--input", required=True, help="realization JSON file")
    p.add_argument("--tol-relation", type=float, help="relation/algebra residual tolerance")
    p.add_argument("--tol-rank", type=float, help="rank tolerance for the invariant subspace")
    common(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("selftest-fixtures", help="write canonical/embedded/perturbed/classical fixtures")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--n", type=int, nargs="*", help="n values (default 3 4 5)")
    p.add_argument("--server", help="execute against a running service instead of in process")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_fixtures)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ServiceError as exc:
        print(f"error ({exc.code}): {exc.detail}", file=sys.stderr)
        return exc.exit_code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
