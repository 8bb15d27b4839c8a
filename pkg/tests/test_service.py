import pytest
from fastapi.testclient import TestClient

from statarb.service import app

client = TestClient(app)

PARAMS = {"alpha": 0.16, "r_f": 0.04, "sigma": 0.2, "s0": 1.0}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_analytic_const_barrier():
    resp = client.post("/analytic", json={
        "params": PARAMS,
        "strategy": {"kind": "long_const_barrier", "barrier": 1.2}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["expected_profit_limit"] == pytest.approx(0.141334, abs=1e-6)
    assert body["variance_limit"] == pytest.approx(0.0044502, abs=1e-6)
    assert body["loss_prob_limit"] == pytest.approx(0.044925, abs=1e-5)
    assert body["laplace_at_rf"] == pytest.approx(1.0 / 1.2 * 1.141334,
                                                  abs=1e-5)
    assert body["ig"]["shape"] == pytest.approx((0.9116 / 1.0) ** 2,
                                                rel=1e-3)
    assert body["variance_growth"] == "diverges_over_t"


def test_analytic_buyhold():
    resp = client.post("/analytic", json={
        "params": PARAMS, "strategy": {"kind": "buy_hold"}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["expected_profit_limit"] is None
    assert body["ig"] is None


def test_simulate_roundtrip():
    resp = client.post("/simulate", json={
        "params": PARAMS,
        "strategy": {"kind": "long_det_barrier", "k": 0.05},
        "horizons": [1.0, 2.0], "paths": 200, "steps_per_year": 52,
        "seed": 5})
    assert resp.status_code == 200
    body = resp.json()
    assert [r["horizon"] for r in body["rows"]] == [1.0, 2.0]
    assert set(body["histograms"]) == {"1", "2"}
    assert sum(n for _, n in body["histograms"]["1"]) == 200
    assert body["config"]["seed"] == 5


def test_classify_endpoint():
    resp = client.post("/classify", json={"params": PARAMS})
    assert resp.status_code == 200
    assert resp.json()["verdict"] == "long_stat_arb"
    assert resp.json()["margin"] == pytest.approx(0.10)


def test_portfolio_endpoint():
    resp = client.post("/portfolio",
                       json={"sigma1": 0.1, "sigma2": 0.3, "rho": 0.0})
    assert resp.status_code == 200
    assert resp.json()["a_hat"] == pytest.approx(0.9)


def test_check_endpoint():
    rows = [
        {"horizon": 1, "mean": 0.02, "se_mean": 0.004, "var": 0.01,
         "var_over_t": 0.01, "loss_prob": 0.3, "se_loss": 0.001,
         "analytic_mean": None, "analytic_loss_prob": None},
        {"horizon": 20, "mean": 0.05, "se_mean": 0.0005, "var": 1e-4,
         "var_over_t": 5e-6, "loss_prob": 0.004, "se_loss": 0.001,
         "analytic_mean": None, "analytic_loss_prob": None},
        {"horizon": 50, "mean": 0.05, "se_mean": 1e-4, "var": 5e-6,
         "var_over_t": 1e-7, "loss_prob": 0.001, "se_loss": 0.001,
         "analytic_mean": None, "analytic_loss_prob": None},
    ]
    resp = client.post("/check", json={"rows": rows})
    assert resp.status_code == 200
    assert resp.json()["overall"] is True


def test_domain_error_maps_to_400():
    resp = client.post("/analytic", json={
        "params": PARAMS,
        "strategy": {"kind": "long_const_barrier", "barrier": 0.5}})
    assert resp.status_code == 400
    assert "barrier" in resp.json()["detail"]


def test_configuration_error_maps_to_422():
    resp = client.post("/simulate", json={
        "params": PARAMS,
        "strategy": {"kind": "long_det_barrier", "k": 0.05},
        "horizons": [2.0, 1.0], "paths": 200, "steps_per_year": 52,
        "seed": 5})
    assert resp.status_code == 422


def test_schema_validation_is_422():
    resp = client.post("/classify",
                       json={"params": {"alpha": 0.1, "r_f": 0.04,
                                        "sigma": -0.2, "s0": 1.0}})
    assert resp.status_code == 422
