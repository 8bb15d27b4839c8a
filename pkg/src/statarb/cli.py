"""Command-line client.

Subcommands: analytic, simulate, classify, portfolio, check.  By default
the core handlers run in-process; with --server the same requests are sent
to a running service instance over HTTP.

Exit codes: 0 success, 2 configuration error, 3 domain error,
4 acceptance-check failure (check only).
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click
from pydantic import BaseModel, ValidationError

from . import __version__, results, service
from .errors import ConfigurationError, DomainError
from .schemas import (AnalyticRequest, AnalyticResponse, CheckRequest,
                      CheckResponse, ClassifyRequest, ClassifyResponse,
                      PortfolioRequest, PortfolioResponse, SimulateRequest,
                      SimulateResponse, ToleranceIn)

EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_CHECK_FAILED = 4

_ENDPOINTS = {
    AnalyticRequest: ("/analytic", service.handle_analytic, AnalyticResponse),
    SimulateRequest: ("/simulate", service.handle_simulate, SimulateResponse),
    ClassifyRequest: ("/classify", service.handle_classify, ClassifyResponse),
    PortfolioRequest: ("/portfolio", service.handle_portfolio,
                       PortfolioResponse),
    CheckRequest: ("/check", service.handle_check, CheckResponse),
}


def _dispatch(request: BaseModel, server: str | None) -> BaseModel:
    """Run a request in-process, or POST it to a server if one is given."""
    endpoint, handler, response_model = _ENDPOINTS[type(request)]
    if server is None:
        return handler(request)
    import httpx

    resp = httpx.post(server.rstrip("/") + endpoint,
                      json=request.model_dump(), timeout=600.0)
    if resp.status_code == 422:
        raise ConfigurationError(str(resp.json().get("detail")))
    if resp.status_code == 400:
        raise DomainError(str(resp.json().get("detail")))
    resp.raise_for_status()
    return response_model.model_validate(resp.json())


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigurationError(f"config file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc


def _validate(model_cls, data: dict):
    try:
        return model_cls.model_validate(data)
    except ValidationError as exc:
        missing = [".".join(str(p) for p in err["loc"])
                   for err in exc.errors()]
        raise ConfigurationError(
            "invalid configuration, check field(s): " + ", ".join(missing)
        ) from exc


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        for key, value in payload.items():
            click.echo(f"{key},{_scalar(value)}")


def _scalar(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _run(fn):
    try:
        fn()
    except ConfigurationError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except DomainError as exc:
        click.echo(f"domain error: {exc}", err=True)
        sys.exit(EXIT_DOMAIN)


@click.group()
@click.version_option(__version__)
@click.option("--server", default=None, metavar="URL",
              help="Send requests to a running service instead of "
                   "executing in-process.")
@click.pass_context
def main(ctx, server):
    """Barrier-stopped trading strategies under geometric Brownian motion."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.option("--config", "config_path", required=True, type=str,
              help="JSON file with params and strategy sections.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv")
@click.pass_context
def analytic(ctx, config_path, fmt):
    """Closed-form report for one (params, strategy) pair."""
    def body():
        cfg = _load_config(config_path)
        req = _validate(AnalyticRequest, cfg)
        resp = _dispatch(req, ctx.obj["server"])
        payload = resp.model_dump()
        ig = payload.pop("ig")
        payload["ig_mean"] = None if ig is None else ig["mean"]
        payload["ig_shape"] = None if ig is None else ig["shape"]
        _emit(payload, fmt)
    _run(body)


@main.command()
@click.option("--config", "config_path", required=True, type=str,
              help="JSON experiment config.")
@click.option("--out", "out_dir", required=True, type=str,
              help="Output directory for estimates.csv, histograms, "
                   "manifest.json.")
@click.option("--seed", type=int, default=None,
              help="Override the config seed.")
@click.option("--workers", type=int, default=None,
              help="Override the config worker count.")
@click.option("--bridge-correction", is_flag=True, default=False,
              help="Enable the Brownian-bridge intra-step crossing "
                   "correction.")
@click.pass_context
def simulate(ctx, config_path, out_dir, seed, workers, bridge_correction):
    """Run a Monte Carlo experiment and write result files."""
    def body():
        cfg = _load_config(config_path)
        if seed is not None:
            cfg["seed"] = seed
        if workers is not None:
            cfg["workers"] = workers
        if bridge_correction:
            cfg["bridge_correction"] = True
        req = _validate(SimulateRequest, cfg)
        t0 = time.perf_counter()
        resp = _dispatch(req, ctx.obj["server"])
        out = results.write_outputs(resp, out_dir,
                                    wall_time_s=time.perf_counter() - t0)
        click.echo(f"wrote {out / 'estimates.csv'}")
    _run(body)


@main.command()
@click.option("--config", "config_path", default=None, type=str,
              help="JSON file with a params section.")
@click.option("--alpha", type=float, default=None)
@click.option("--r-f", "r_f", type=float, default=None)
@click.option("--sigma", type=float, default=None)
@click.option("--s0", type=float, default=1.0)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv")
@click.pass_context
def classify(ctx, config_path, alpha, r_f, sigma, s0, fmt):
    """Classify parameters against the statistical-arbitrage condition."""
    def body():
        if config_path is not None:
            params = _load_config(config_path).get("params")
            if params is None:
                raise ConfigurationError("config is missing: params")
        else:
            if alpha is None or r_f is None or sigma is None:
                raise ConfigurationError(
                    "provide --config or all of --alpha, --r-f, --sigma")
            params = {"alpha": alpha, "r_f": r_f, "sigma": sigma, "s0": s0}
        req = _validate(ClassifyRequest, {"params": params})
        resp = _dispatch(req, ctx.obj["server"])
        _emit(resp.model_dump(), fmt)
    _run(body)


@main.command()
@click.option("--sigma1", type=float, required=True)
@click.option("--sigma2", type=float, required=True)
@click.option("--rho", type=float, required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv")
@click.pass_context
def portfolio(ctx, sigma1, sigma2, rho, fmt):
    """Minimum-variance weights for two combined strategies."""
    def body():
        req = _validate(PortfolioRequest,
                        {"sigma1": sigma1, "sigma2": sigma2, "rho": rho})
        resp = _dispatch(req, ctx.obj["server"])
        _emit(resp.model_dump(), fmt)
    _run(body)


@main.command()
@click.option("--estimates", "estimates_path", required=True, type=str,
              help="Path to an estimates.csv produced by simulate.")
@click.option("--loss-tol", type=float, default=0.005)
@click.option("--var-rel-tol", type=float, default=1e-3)
@click.option("--mean-se-mult", type=float, default=3.0)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv")
@click.pass_context
def check(ctx, estimates_path, loss_tol, var_rel_tol, mean_se_mult, fmt):
    """Test the four statistical-arbitrage conditions on saved estimates.

    Exits 4 when the overall verdict is negative.
    """
    def body():
        rows = results.read_estimates_csv(estimates_path)
        req = _validate(CheckRequest, {
            "rows": [r.model_dump() for r in rows],
            "tolerances": ToleranceIn(loss=loss_tol, var_rel=var_rel_tol,
                                      mean_se_mult=mean_se_mult).model_dump(),
        })
        resp = _dispatch(req, ctx.obj["server"])
        payload = resp.model_dump()
        payload.pop("evidence")
        _emit(payload, fmt)
        if not resp.overall:
            sys.exit(EXIT_CHECK_FAILED)
    _run(body)


if __name__ == "__main__":
    main()
