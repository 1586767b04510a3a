"""HTTP surface: endpoints, schemas, error codes."""

import json

import pytest
from fastapi.testclient import TestClient

from tempcert import canonical_observables, perturb_realization
from tempcert.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def canonical3():
    return canonical_observables(3).to_dict()


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_openapi_schema_generates(client):
    body = client.get("/openapi.json").json()
    assert {"/bounds/{n}", "/evaluate", "/certify", "/fixtures"} <= set(body["paths"])


class TestBounds:
    def test_small_n_includes_brute_force(self, client):
        body = client.get("/bounds/4").json()
        assert body == {
            "n": 4,
            "alpha": 3,
            "eta_C": 32,
            "eta_Q": 40,
            "label_count": 14,
            "brute_force": 32,
            "brute_force_agrees": True,
            "brute_force_note": None,
        }

    def test_large_n_skips_brute_force(self, client):
        body = client.get("/bounds/6").json()
        assert body["eta_C"] == 160 and body["eta_Q"] == 200
        assert body["brute_force"] is None
        assert "skipped" in body["brute_force_note"]

    def test_invalid_n(self, client):
        resp = client.get("/bounds/2")
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "invalid_n"


class TestInequality:
    def test_temporal_t3(self, client):
        body = client.get("/inequality/temporal/3").json()
        assert len(body["terms"]) == 10
        assert body["classical_bound"] == 8 and body["quantum_bound"] == 10

    def test_unknown_flavor(self, client):
        resp = client.get("/inequality/spooky/3")
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "schema"


class TestEvaluate:
    def test_canonical_saturates(self, client, canonical3):
        resp = client.post("/evaluate", json={"realization": canonical3})
        assert resp.status_code == 200
        body = resp.json()
        assert abs(body["total"] - 10.0) < 1e-9
        assert body["violated"] is True
        assert len(body["terms"]) == 10

    def test_perturbed_is_data_not_error(self, client):
        pert = perturb_realization(canonical_observables(3), 0.1, seed=707).to_dict()
        body = client.post("/evaluate", json={"realization": pert}).json()
        assert body["total"] < 10.0
        assert body["violated"] is True  # still above the classical bound

    def test_malformed_payload_is_schema_error(self, client, canonical3):
        bad = dict(canonical3)
        bad["state"] = [[0.0, 1.0]]
        resp = client.post("/evaluate", json={"realization": bad})
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "schema"

    def test_non_involution_is_validation_error(self, client, canonical3):
        bad = json.loads(json.dumps(canonical3))
        bad["observables"]["A1"][0][0] = [3.0, 0.0]
        resp = client.post("/evaluate", json={"realization": bad})
        assert resp.status_code == 400
        err = resp.json()["error"]
        assert err["code"] == "validation"
        assert "A1" in err["detail"]

    def test_missing_observable(self, client, canonical3):
        bad = json.loads(json.dumps(canonical3))
        del bad["observables"]["N12"]
        resp = client.post("/evaluate", json={"realization": bad})
        assert resp.status_code == 422
        assert "N12" in resp.json()["error"]["detail"]


class TestCertify:
    def test_canonical_passes(self, client, canonical3):
        body = client.post("/certify", json={"realization": canonical3}).json()
        assert body["verdict"] == "pass"
        assert body["subspace_dim"] == 8
        assert body["nij_signs"] == {"N12": 1, "N13": 1, "N23": 1}
        assert body["fidelity"] > 1 - 1e-9

    def test_perturbed_fails_with_diagnostics(self, client):
        pert = perturb_realization(canonical_observables(3), 0.1, seed=707).to_dict()
        body = client.post("/certify", json={"realization": pert}).json()
        assert body["verdict"] == "fail"
        assert max(body["relation_residuals"].values()) > 1e-3
        assert body["failed_checks"]

    def test_tolerance_overrides(self, client):
        pert = perturb_realization(canonical_observables(3), 0.1, seed=707).to_dict()
        loose = {
            "relation": 1.0,
            "algebra": 1.0,
            "invariance": 1.0,
            "hatted": 1.0,
            "unitary": 1.0,
            "equivalence": 1.0,
            "fidelity": 1.0,
        }
        body = client.post(
            "/certify", json={"realization": pert, "tolerances": loose}
        ).json()
        assert body["tolerances"]["relation"] == 1.0
        assert body["verdict"] == "pass"  # everything waved through

    def test_unknown_tolerance_key_rejected(self, client, canonical3):
        resp = client.post(
            "/certify", json={"realization": canonical3, "tolerances": {"vibes": 1.0}}
        )
        assert resp.status_code == 422


class TestFixtures:
    def test_bundle_layout(self, client):
        body = client.get("/fixtures", params={"seed": 7, "ns": "3"}).json()
        assert set(body["files"]) == {
            "canonical_n3.json",
            "embedded_n3.json",
            "perturbed_n3.json",
            "classical_n3.json",
        }
        entries = {e["kind"]: e for e in body["manifest"]["entries"]}
        assert entries["canonical"]["expected_total"] == 10.0
        assert entries["classical"]["expected_total"] == 8.0
        assert entries["perturbed"]["expected_total"] < 10.0

    def test_same_seed_same_bundle(self, client):
        one = client.get("/fixtures", params={"seed": 3, "ns": "3"}).json()
        two = client.get("/fixtures", params={"seed": 3, "ns": "3"}).json()
        assert one == two

    def test_bad_ns_rejected(self, client):
        assert client.get("/fixtures", params={"ns": "3,x"}).status_code == 422
