"""
HTTP surface through FastAPI's TestClient.
"""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from app.api import routes
from app.core.errors import PipelineInvariantError
from app.services.generators import gen_extremal_instance
from main import app
from tests.builders import complete_instance, graph_text


@pytest.fixture(scope="module")
def client() -> TestClient:
    return TestClient(app)


def _upload(text: str, name: str = "graph.txt") -> tuple[str, str, str]:
    return (name, text, "text/plain")


K6_TEXT = graph_text(complete_instance(6))


def test_health_check(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy", "service": "twofactor", "version": "1.0.0"}


class TestSolve:
    def test_success(self, client):
        response = client.post("/solve", files={"file": _upload(K6_TEXT)}, data={"k": "1"})
        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "success"
        assert data["factor"] == [[1, 2, 3, 4, 5, 6]]

    def test_search_failure_is_not_an_http_error(self, client):
        text = graph_text(gen_extremal_instance(10, 3))
        response = client.post("/solve", files={"file": _upload(text)}, data={"k": "3"})
        assert response.status_code == 200
        assert response.json()["status"] == "search_failure"

    def test_hamilton_form_field(self, client):
        text = graph_text(complete_instance(6), with_hamilton=False)
        response = client.post(
            "/solve",
            files={"file": _upload(text)},
            data={"k": "1", "hamilton": "1 3 5 2 4 6"},
        )
        assert response.status_code == 200
        assert response.json()["factor"] == [[1, 3, 5, 2, 4, 6]]

    def test_bad_graph(self, client):
        response = client.post("/solve", files={"file": _upload("3 5\n1 2\n")}, data={"k": "1"})
        assert response.status_code == 400
        assert "declares 5 edges" in response.json()["detail"]

    def test_empty_upload(self, client):
        response = client.post("/solve", files={"file": _upload("")}, data={"k": "1"})
        assert response.status_code == 400
        assert response.json()["detail"] == "uploaded file is empty"

    def test_bad_epsilon(self, client):
        response = client.post(
            "/solve", files={"file": _upload(K6_TEXT)}, data={"k": "2", "epsilon": "3"}
        )
        assert response.status_code == 400

    def test_k_must_be_positive(self, client):
        response = client.post("/solve", files={"file": _upload(K6_TEXT)}, data={"k": "0"})
        assert response.status_code == 422

    def test_broken_invariant_is_a_server_error(self, client, monkeypatch):
        def broken(instance, config):
            raise PipelineInvariantError("verified factor has 1 cycles, wanted 2")

        monkeypatch.setattr(routes, "solve", broken)
        response = client.post("/solve", files={"file": _upload(K6_TEXT)}, data={"k": "2"})
        assert response.status_code == 500
        assert response.json()["detail"].startswith("internal invariant violated")


class TestVerify:
    def test_valid(self, client):
        response = client.post(
            "/verify",
            files={"file": _upload(K6_TEXT), "factor": _upload("1 2 3\n4 5 6\n", "f.txt")},
        )
        assert response.json() == {"valid": True, "components": 2, "error": None}

    def test_invalid(self, client):
        response = client.post(
            "/verify",
            files={"file": _upload(K6_TEXT), "factor": _upload("1 2\n3 4 5 6\n", "f.txt")},
        )
        data = response.json()
        assert response.status_code == 200
        assert data["valid"] is False
        assert data["error"] == "cycle of length 2 starting at vertex 1"


def test_aux_dot(client):
    response = client.post("/aux/dot", files={"file": _upload(K6_TEXT)})
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/vnd.graphviz")
    assert response.text.startswith("graph A {")
    assert response.text.count("color=red") == 9


class TestOracle:
    def test_k6(self, client):
        response = client.post("/oracle", files={"file": _upload(K6_TEXT)})
        assert response.status_code == 200
        assert response.json()["achievable"] == [1, 2]

    def test_cap(self, client):
        text = graph_text(complete_instance(15))
        response = client.post("/oracle", files={"file": _upload(text)})
        assert response.status_code == 400
        assert "capped" in response.json()["detail"]

    def test_malformed_cap(self, client, monkeypatch):
        monkeypatch.setenv("TWOFACTOR_ORACLE_CAP", "-3")
        response = client.post("/oracle", files={"file": _upload(K6_TEXT)})
        assert response.status_code == 400
        assert response.json()["detail"] == "TWOFACTOR_ORACLE_CAP must be >= 1, got -3"


class TestParams:
    def test_values(self, client):
        response = client.get("/params", params={"epsilon": 0.5, "k": 2, "n": 40})
        assert response.status_code == 200
        data = response.json()
        assert data["gamma"] == 0.25
        assert data["desk_scale"] is True
        assert data["search"]["K"] == data["K"]
        assert data["search"]["c"] == 0.0

    def test_rejects_epsilon(self, client):
        response = client.get("/params", params={"epsilon": 2, "k": 2})
        assert response.status_code == 400
        assert "epsilon" in response.json()["detail"]
