"""Test cases for the HTTP service"""

from fastapi import status

from app.models import CheckResult, VerificationReport


def test_health_check(test_client):
    response = test_client.get("/")
    assert response.status_code == status.HTTP_200_OK
    body = response.json()
    assert body["status"] == "healthy"
    assert body["precision_bits"] == 128


def test_decompose(test_client):
    response = test_client.get("/fusion/decompose", params={"x": "ub", "y": "ub"})
    assert response.status_code == status.HTTP_200_OK
    body = response.json()
    assert body["summands"] == ["ubub", "ub", "e"]
    assert body["dim_product"] == body["dim_sum"]


def test_decompose_rejects_bad_word(test_client):
    response = test_client.get("/fusion/decompose", params={"x": "uxb", "y": "u"})
    assert response.status_code == status.HTTP_400_BAD_REQUEST


def test_q_outside_range_rejected(test_client):
    response = test_client.get("/qdim", params={"word": "u", "q": 1.5})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY


def test_qdim(test_client):
    response = test_client.get("/qdim", params={"word": "ubuub"})
    assert response.status_code == status.HTTP_200_OK
    assert float(response.json()["dim_q"]) == 12


def test_cylinder_mass(test_client):
    response = test_client.get("/boundary/cylinder", params={"word": "u", "q": 0.5})
    assert response.status_code == status.HTTP_200_OK
    assert abs(float(response.json()["mass"]) - 0.5) < 1e-15


def test_trace_gap(test_client):
    response = test_client.get("/traces/gap", params={"n": 3, "p": 1, "k": 2})
    body = response.json()
    assert response.status_code == status.HTTP_200_OK
    assert abs(float(body["gap"]) - 1 / 6) < 1e-15
    assert body["pass"]


def test_trace_gap_window_error(test_client):
    response = test_client.get("/traces/gap", params={"n": 3, "p": 2, "k": 2})
    assert response.status_code == status.HTTP_400_BAD_REQUEST


def test_verify(test_client):
    response = test_client.post("/verify", json={"suites": ["convolution"], "source": {"q": 0.5}})
    assert response.status_code == status.HTTP_200_OK
    body = response.json()
    assert body["passed"]
    assert body["suites"] == ["convolution"]


def test_verify_rejects_unknown_suite(test_client):
    response = test_client.post("/verify", json={"suites": ["nonsense"]})
    assert response.status_code == status.HTTP_400_BAD_REQUEST


def test_verify_rejects_bad_source(test_client):
    response = test_client.post("/verify", json={"source": {"q": 0.5, "F": [[[1, 0]]]}})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY


def test_verify_failure_returns_report(test_client, monkeypatch):
    class FailingVerifier:
        def __init__(self, ctx, *args, **kwargs):
            self.ctx = ctx

        def run(self, suites):
            return VerificationReport(
                suites=list(suites), precision_bits=self.ctx.precision_bits,
                checks=[CheckResult(suite="fusion", name="worked_examples", passed=False)],
            )

    monkeypatch.setattr("app.main.Verifier", FailingVerifier)
    response = test_client.post("/verify", json={"suites": ["fusion"]})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert response.json()["detail"]["passed"] is False
