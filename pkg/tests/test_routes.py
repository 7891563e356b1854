import time

import pytest
from margalg import create_app


@pytest.fixture
def client():
    app = create_app()
    app.config["TESTING"] = True
    with app.test_client() as client:
        yield client


def _wait_for(client, job_id, timeout=60.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        data = client.get(f"/api/status/{job_id}").get_json()
        if data["status"] != "processing":
            return data
        time.sleep(0.05)
    raise AssertionError(f"job {job_id} did not finish")


class TestHealth:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.get_json()["status"] == "healthy"
        assert response.get_json()["checks"] == 15


class TestTableRoutes:
    def test_margins(self, client):
        response = client.post("/api/margins", json={
            "table": {"shape": [2, 2], "entries": [1, 2, 3, 4]}, "face": [2],
        })
        assert response.status_code == 200
        assert response.get_json() == {"shape": [2], "entries": ["4", "6"]}

    def test_decompose(self, client):
        response = client.post("/api/decompose", json={
            "table": {"shape": [2, 2], "entries": [1, 2, 3, 4]},
        })
        assert response.get_json()["zero_margin"]["entries"] == ["-1/5", "1/5", "1/5", "-1/5"]

    def test_zero_total(self, client):
        response = client.post("/api/detect", json={
            "table": {"shape": [2], "entries": [1, -1]},
        })
        assert response.status_code == 400

    def test_body_must_be_json(self, client):
        assert client.post("/api/margins", data="nope").status_code == 400


class TestIdealRoutes:
    def test_k_delta(self, client):
        response = client.post("/api/gens", json={
            "kind": "K_Delta", "shape": [2, 2, 2], "facets": "1,2;1,3;2,3",
        })
        assert response.status_code == 200
        assert response.get_json()["counts"]["minimal_generators"] == 12

    def test_facets_required(self, client):
        response = client.post("/api/gens", json={"kind": "J_Delta", "shape": [2, 2]})
        assert response.status_code == 400

    def test_unknown_kind(self, client):
        response = client.post("/api/gens", json={"kind": "Bogus", "shape": [2, 2], "facets": "1,2"})
        assert response.status_code == 400

    def test_budget_exhaustion(self, client):
        response = client.post("/api/gens", json={
            "kind": "Q_Delta", "shape": [2, 2, 2], "facets": "1,2;3", "budget": 0,
        })
        assert response.status_code == 422
        assert response.get_json()["steps"] >= 1

    def test_min_primes(self, client):
        response = client.post("/api/min-primes", json={"shape": [2, 2, 2], "facets": "1,2;1,3;2,3"})
        assert len(response.get_json()["components"]) == 5


class TestVerifyJobs:
    def test_unknown_check(self, client):
        response = client.post("/api/verify", json={"check": "nope"})
        assert response.status_code == 400

    def test_job_runs_to_completion(self, client):
        response = client.post("/api/verify", json={"check": "counts-running-example", "seed": 0})
        job_id = response.get_json()["job_id"]
        data = _wait_for(client, job_id)
        assert data["status"] == "completed"
        assert data["reports"][0]["status"] == "pass"

    def test_missing_job(self, client):
        assert client.get("/api/status/missing").status_code == 404
