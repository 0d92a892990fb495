import math

import pytest
from fastapi.testclient import TestClient

from app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/api/v1/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "healthy"
    assert set(body["versions"]) == {"numpy", "sympy"}


class TestConstants:
    def test_gaussian(self, client):
        response = client.get("/api/v1/constants", params={"field": -4, "prime_bound": 10_000})
        assert response.status_code == 200
        body = response.json()
        assert body["unit_count"] == 4
        assert body["limit_constant"]["value"] == pytest.approx(0.346, abs=0.003)

    def test_unknown_field(self, client):
        assert client.get("/api/v1/constants", params={"field": -5, "prime_bound": 100}).status_code == 422

    def test_bad_prime_bound(self, client):
        assert client.get("/api/v1/constants", params={"prime_bound": 1}).status_code == 422


class TestDensity:
    def value(self, client, kind, **params):
        response = client.get(f"/api/v1/density/{kind}", params=params)
        assert response.status_code == 200, response.text
        assert response.json()["kind"] == kind
        return response.json()["value"]

    def test_unscaled(self, client):
        assert self.value(client, "unscaled") == pytest.approx(1 / (2 * math.pi))
        assert self.value(client, "unscaled-euler", re=0.5) == pytest.approx(math.exp(-2) / math.pi)

    def test_poissonian(self, client):
        assert self.value(client, "poissonian", grid="eisenstein") == pytest.approx(2 * math.pi / 3)

    def test_theta(self, client):
        assert self.value(client, "theta-infty", lam=1.0, x=1.2) == pytest.approx(4 / 1.2 ** 4)

    def test_weighted_linear(self, client):
        assert self.value(client, "weighted-linear", x=0.5, prime_bound=1000) == 0

    def test_real(self, client):
        assert self.value(client, "real", t=0.0, mode="ortho") == pytest.approx(1.0)

    def test_theta_needs_lambda(self, client):
        assert client.get("/api/v1/density/theta-infty", params={"x": 1.0}).status_code == 422

    def test_unknown_kind(self, client):
        assert client.get("/api/v1/density/other").status_code == 422

    def test_unknown_grid(self, client):
        assert client.get("/api/v1/density/poissonian", params={"grid": "hexagon"}).status_code == 422

    def test_radius_limit(self, client):
        response = client.get("/api/v1/density/theta-infty", params={"lam": 1.0, "x": 1e6})
        assert response.status_code == 422
