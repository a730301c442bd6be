import pytest
from fastapi.testclient import TestClient

from symcone.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_info_albert(client):
    resp = client.post("/info", json={"algebra": "albert"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["dim_component1"] == 351
    assert body["dim_component2"] == 27
    assert body["dim"] == 27
    assert body["gyndikin_discrete"] == [4.0, 8.0]


def test_info_sym3(client):
    body = client.post("/info", json={"algebra": "sym", "rank": 3}).json()
    assert (body["dim_component1"], body["dim_component2"]) == (15, 6)
    assert body["split_trace_numeric"] == pytest.approx(12.0, abs=1e-9)


def test_info_spin_ambient4(client):
    body = client.post("/info", json={"algebra": "spin", "ambient": 4}).json()
    assert body["dim_component2"] == 1
    assert body["peirce_d"] == 3


def test_info_missing_rank_is_client_error(client):
    resp = client.post("/info", json={"algebra": "herm"})
    assert resp.status_code == 422
    assert "rank" in resp.json()["detail"]


def test_info_rejects_unknown_fields(client):
    resp = client.post("/info", json={"algebra": "sym", "rank": 2, "bogus": 1})
    assert resp.status_code == 422


def test_check_identities_sym2(client):
    resp = client.post("/check-identities", json={"algebra": "sym", "rank": 2, "seed": 4})
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is True
    counts = {name: row["count"] for name, row in body["case_table"].items()}
    assert counts == {"A1": 2, "A2": 1, "B1": 1, "B2": 2, "B3": 0, "B4": 0, "B5": 0, "B6": 0}
    assert all(check["passed"] for check in body["checks"])


def test_verify_deterministic(client):
    req = {
        "algebra": "sym",
        "rank": 2,
        "p": 1.5,
        "p_prime": 1.0,
        "samples": 5000,
        "seed": 99,
        "theta_scales": [0.05, 0.1],
        "diff_checks": 2,
    }
    first = client.post("/verify", json=req)
    second = client.post("/verify", json=req)
    assert first.status_code == 200
    assert first.json() == second.json()
    body = first.json()
    assert body["constants"]["a"] == pytest.approx(0.6)
    assert body["constants"]["p1"] == pytest.approx(1.0 / 1.5)
    assert body["constants"]["p2"] == pytest.approx(-1.0 / 3.0)
    assert {r["identity"] for r in body["reports"]} == {
        "linear-conditional-mean",
        "quadratic-conditional-mean-1",
        "quadratic-conditional-mean-2",
        "cumulant-differential",
    }
    # the sampler is gated against its own Laplace transform first
    assert len(body["sampler_gates"]) == 2
    assert all(g["passed"] for g in body["sampler_gates"])
    assert {g["p"] for g in body["sampler_gates"]} == {1.5, 1.0}
    grid_row = body["sampler_gates"][0]["laplace_grid"][0]
    assert set(grid_row) == {"theta", "empirical", "exact", "std_error", "z_score"}


def test_verify_unsupported_kind(client):
    resp = client.post(
        "/verify",
        json={"algebra": "quat", "rank": 2, "p": 4.0, "p_prime": 4.0, "samples": 1000},
    )
    assert resp.status_code == 422
    assert "sym" in resp.json()["detail"]


def test_verify_bad_shape(client):
    resp = client.post(
        "/verify",
        json={"algebra": "sym", "rank": 3, "p": 0.75, "p_prime": 1.0, "samples": 1000},
    )
    assert resp.status_code == 422


def test_verify_sigma_specs(client):
    base = {"algebra": "sym", "rank": 2, "p": 1.5, "p_prime": 1.0,
            "samples": 2000, "seed": 1, "theta_scales": [0.1], "diff_checks": 1}
    for sigma in ("identity", "diag:2,1", "random:5"):
        resp = client.post("/verify", json={**base, "sigma": sigma})
        assert resp.status_code == 200, sigma
    resp = client.post("/verify", json={**base, "sigma": "diag:1"})
    assert resp.status_code == 422
    resp = client.post("/verify", json={**base, "sigma": "diag:-1,-2"})
    assert resp.status_code == 422
    resp = client.post("/verify", json={**base, "sigma": "nonsense"})
    assert resp.status_code == 422


def test_recover_endpoint(client):
    resp = client.post(
        "/recover",
        json={"a": 1.0 / 3.0, "b1": 1.0 / 6.0, "b2": 1.0 / 15.0, "n": 6},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["peirce_d"] == 1
    assert body["rank"] == 3
    assert body["kinds"] == [{"kind": "sym", "ambient": None}]


def test_recover_rejects_inconsistent(client):
    resp = client.post("/recover", json={"a": 0.3, "b1": 0.2, "b2": 0.25, "n": 6})
    assert resp.status_code == 422


def test_dims_table(client):
    resp = client.get("/dims-table")
    assert resp.status_code == 200
    rows = resp.json()["rows"]
    assert len(rows) == 13
    by_key = {(r["kind"], r["rank"], r["ambient"]): r for r in rows}
    assert by_key[("albert", 3, None)]["dim_component1"] == 351
    assert by_key[("sym", 4, None)]["dim_component2"] == 20
    assert by_key[("quat", 2, None)]["dim_component1"] == 20
    for ambient in (2, 3, 4, 5, 6):
        assert by_key[("spin", 2, ambient)]["dim_component2"] == 1
