import pytest
from fastapi.testclient import TestClient

from strohhacker.config import TOOL_VERSION
from strohhacker.main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    res = client.get("/health")
    assert res.status_code == 200
    assert res.json() == {"status": "ok", "version": TOOL_VERSION}


# ── thresholds ────────────────────────────────────────
def test_threshold(client):
    res = client.get("/thresholds/T25", params={"p": 2})
    assert res.status_code == 200
    body = res.json()
    assert body["theorem_id"] == "T25"
    assert body["output_level"] == pytest.approx(2**0.5 / 2)


def test_threshold_out_of_domain(client):
    res = client.get("/thresholds/T22", params={"p": 1, "level": 1.0})
    assert res.status_code == 422
    assert res.json()["detail"].startswith("DomainError")


def test_threshold_infeasible(client):
    res = client.get("/thresholds/T37", params={"p": 1, "b": 0, "level": 0.5})
    assert res.status_code == 409


def test_unknown_theorem(client):
    assert client.get("/thresholds/T99").status_code == 422


def test_roots(client):
    res = client.get("/thresholds/T37/roots", params={"p": 1, "b": 0})
    assert res.status_code == 200
    roots = res.json()
    assert roots["gamma1"] == pytest.approx(0.5)
    assert roots["gamma3"] == pytest.approx(5 / 9)
    assert roots["gamma2"] == pytest.approx(1) and roots["gamma4"] == pytest.approx(1)


def test_roots_only_for_t37(client):
    assert client.get("/thresholds/T22/roots").status_code == 404


# ── admissibility ─────────────────────────────────────
def test_certify(client):
    res = client.post("/admissibility/certify", json={"psi_id": "PsiT22", "p": 1, "level": 0.75})
    assert res.status_code == 200
    body = res.json()
    assert body["certified"]
    assert body["sup_value"] == pytest.approx(2 / 3, abs=1e-6)


def test_certify_rejects_coarse_sampling(client):
    res = client.post("/admissibility/certify", json={"psi_id": "PsiT25", "p": 1, "samples": 10})
    assert res.status_code == 422


def test_certify_domain_error(client):
    res = client.post("/admissibility/certify", json={"psi_id": "PsiT22", "p": 1, "b": 0.5, "level": 0.5})
    assert res.status_code == 422


# ── verify ────────────────────────────────────────────
def check_body(**overrides):
    body = {"theorem_id": "T25", "p": 1, "unit_coeffs": [[1.0, 0.0]], "levels": 6, "angular_count": 256}
    body.update(overrides)
    return body


def test_check(client):
    res = client.post("/verify/check", json=check_body())
    assert res.status_code == 200
    body = res.json()
    assert body["status"] == "Verified"
    assert body["function_id"] == "request"


def test_check_bad_grid(client):
    assert client.post("/verify/check", json=check_body(angular_count=100)).status_code == 422


def test_check_not_normalized(client):
    res = client.post("/verify/check", json=check_body(unit_coeffs=[[0.5, 0.0]]))
    assert res.status_code == 422
    assert "NotNormalized" in res.json()["detail"]


def test_check_wrong_class(client):
    res = client.post("/verify/check", json=check_body(theorem_id="T32", b=0.5, level=0.5))
    assert res.status_code == 422
    assert "ClassMismatch" in res.json()["detail"]


def test_sharpness(client):
    res = client.post("/verify/sharpness", json={"theorem_id": "T25", "p": 1, "budget": 3})
    assert res.status_code == 200
    body = res.json()
    assert body["evaluations"] == 3
    assert body["penalty_weight"] == 1000
