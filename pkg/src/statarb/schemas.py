"""Pydantic request/response models for the service and CLI client.

These mirror the core dataclasses but stay JSON-native so the same shapes
serve the HTTP API, the config files, and the emitted result files.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from .model import ModelParams
from .strategies import StrategyKind, StrategySpec


class ModelParamsIn(BaseModel):
    alpha: float
    r_f: float = Field(ge=0)
    sigma: float = Field(gt=0)
    s0: float = Field(gt=0)

    def to_core(self) -> ModelParams:
        return ModelParams(alpha=self.alpha, r_f=self.r_f, sigma=self.sigma,
                           s0=self.s0)


class StrategyIn(BaseModel):
    kind: StrategyKind
    barrier: Optional[float] = None
    k: Optional[float] = None

    def to_core(self) -> StrategySpec:
        return StrategySpec(kind=self.kind, barrier=self.barrier, k=self.k)


class AnalyticRequest(BaseModel):
    params: ModelParamsIn
    strategy: StrategyIn


class IGParamsOut(BaseModel):
    mean: float
    shape: float


class AnalyticResponse(BaseModel):
    strategy_kind: str
    expected_profit_limit: Optional[float]
    variance_limit: Optional[float]
    loss_prob_limit: Optional[float]
    laplace_at_rf: Optional[float]
    ig: Optional[IGParamsOut]
    d_laplace_db: Optional[float]
    d_profit_db: Optional[float]
    variance_growth: str


class SimulateRequest(BaseModel):
    params: ModelParamsIn
    strategy: StrategyIn
    horizons: List[float]
    paths: int = Field(ge=100)
    steps_per_year: int = Field(gt=0)
    seed: int = Field(ge=0)
    bridge_correction: bool = False
    workers: int = Field(default=1, ge=1)


class HorizonRow(BaseModel):
    horizon: float
    mean: float
    se_mean: float
    var: float
    var_over_t: float
    loss_prob: float
    se_loss: float
    analytic_mean: Optional[float]
    analytic_loss_prob: Optional[float]


class SimulateResponse(BaseModel):
    config: SimulateRequest
    rows: List[HorizonRow]
    # horizon (as str key for JSON) -> list of [bin_center, count]
    histograms: Dict[str, List[Tuple[float, int]]]


class ClassifyRequest(BaseModel):
    params: ModelParamsIn


class ClassifyResponse(BaseModel):
    verdict: str
    margin: float
    note: str


class PortfolioRequest(BaseModel):
    sigma1: float
    sigma2: float
    rho: float


class PortfolioResponse(BaseModel):
    a_hat: float
    one_minus_a_hat: float
    sigma1: float
    sigma2: float
    rho: float
    combined_variance: float


class ToleranceIn(BaseModel):
    loss: float = 0.005
    var_rel: float = 1e-3
    mean_se_mult: float = 3.0


class CheckRequest(BaseModel):
    rows: List[HorizonRow]
    tolerances: ToleranceIn = ToleranceIn()


class CheckResponse(BaseModel):
    c1_zero_start: bool
    c2_positive_mean: bool
    c3_loss_decay: bool
    c4_var_over_t_decay: bool
    c4_required: bool
    overall: bool
    evidence: dict


class ErrorResponse(BaseModel):
    error: str
    detail: str
