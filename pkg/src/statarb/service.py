"""FastAPI service exposing the toolkit.

Each endpoint is a thin wrapper over a pure handler function; the CLI
client calls the same handlers in-process when no server URL is given.
Configuration errors map to HTTP 422, domain errors to HTTP 400.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__, analytics, classifier, harness
from .errors import ConfigurationError, DomainError
from .schemas import (AnalyticRequest, AnalyticResponse, CheckRequest,
                      CheckResponse, ClassifyRequest, ClassifyResponse,
                      HorizonRow, IGParamsOut, PortfolioRequest,
                      PortfolioResponse, SimulateRequest, SimulateResponse)


def handle_analytic(req: AnalyticRequest) -> AnalyticResponse:
    report = analytics.analytic_report(req.params.to_core(),
                                       req.strategy.to_core())
    ig = (IGParamsOut(mean=report.ig.mean, shape=report.ig.shape)
          if report.ig is not None else None)
    return AnalyticResponse(
        strategy_kind=report.strategy_kind,
        expected_profit_limit=report.expected_profit_limit,
        variance_limit=report.variance_limit,
        loss_prob_limit=report.loss_prob_limit,
        laplace_at_rf=report.laplace_at_rf, ig=ig,
        d_laplace_db=report.d_laplace_db, d_profit_db=report.d_profit_db,
        variance_growth=report.variance_growth)


def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    config = harness.ExperimentConfig(
        params=req.params.to_core(), strategy=req.strategy.to_core(),
        horizons=tuple(req.horizons), paths=req.paths,
        steps_per_year=req.steps_per_year, seed=req.seed,
        bridge_correction=req.bridge_correction, workers=req.workers)
    series = harness.run_experiment(config)
    rows = [HorizonRow(horizon=r.horizon, mean=r.mean, se_mean=r.se_mean,
                       var=r.var, var_over_t=r.var_over_t,
                       loss_prob=r.loss_prob, se_loss=r.se_loss,
                       analytic_mean=r.analytic_mean,
                       analytic_loss_prob=r.analytic_loss_prob)
            for r in series.rows]
    histograms = {
        _horizon_key(h): [(float(c), int(n)) for c, n in zip(*series.histograms[h])]
        for h in series.horizons}
    return SimulateResponse(config=req, rows=rows, histograms=histograms)


def handle_classify(req: ClassifyRequest) -> ClassifyResponse:
    result = classifier.classify(req.params.to_core())
    return ClassifyResponse(verdict=result.verdict.value,
                            margin=result.margin, note=result.note)


def handle_portfolio(req: PortfolioRequest) -> PortfolioResponse:
    w = classifier.min_variance_weights(req.sigma1, req.sigma2, req.rho)
    return PortfolioResponse(
        a_hat=w.a_hat, one_minus_a_hat=1.0 - w.a_hat, sigma1=w.sigma1,
        sigma2=w.sigma2, rho=w.rho, combined_variance=w.combined_variance)


def handle_check(req: CheckRequest) -> CheckResponse:
    rows = [harness.HorizonEstimate(
        horizon=r.horizon, mean=r.mean, se_mean=r.se_mean, var=r.var,
        var_over_t=r.var_over_t, loss_prob=r.loss_prob, se_loss=r.se_loss,
        analytic_mean=r.analytic_mean,
        analytic_loss_prob=r.analytic_loss_prob) for r in req.rows]
    tol = classifier.ToleranceSet(loss=req.tolerances.loss,
                                  var_rel=req.tolerances.var_rel,
                                  mean_se_mult=req.tolerances.mean_se_mult)
    verdict = classifier.check_definition(rows, tol)
    return CheckResponse(
        c1_zero_start=verdict.c1_zero_start,
        c2_positive_mean=verdict.c2_positive_mean,
        c3_loss_decay=verdict.c3_loss_decay,
        c4_var_over_t_decay=verdict.c4_var_over_t_decay,
        c4_required=verdict.c4_required, overall=verdict.overall,
        evidence=verdict.evidence)


def _horizon_key(h: float) -> str:
    return f"{h:g}"


app = FastAPI(title="statarb", version=__version__,
              description="Barrier-stopped trading strategies under GBM: "
                          "closed-form analytics, Monte Carlo estimation, "
                          "and statistical-arbitrage classification.")


def _wrap(handler, req):
    try:
        return handler(req)
    except ConfigurationError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except DomainError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/analytic", response_model=AnalyticResponse)
def analytic(req: AnalyticRequest):
    return _wrap(handle_analytic, req)


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest):
    return _wrap(handle_simulate, req)


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest):
    return _wrap(handle_classify, req)


@app.post("/portfolio", response_model=PortfolioResponse)
def portfolio(req: PortfolioRequest):
    return _wrap(handle_portfolio, req)


@app.post("/check", response_model=CheckResponse)
def check(req: CheckRequest):
    return _wrap(handle_check, req)
