"""Closed-form results for the barrier-stopped strategies.

Covers the standard normal and Inverse Gaussian distributions, the
first-passage Laplace transform of Brownian motion with drift, limiting
mean / variance / loss probability of the discounted profits, barrier
sensitivities, and the buy-and-hold moment formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import DomainError
from .model import FirstPassageProblem, ModelParams


@dataclass(frozen=True)
class IGParams:
    """Inverse Gaussian law of a hitting time: mean = m/mu, shape = m^2."""

    mean: float
    shape: float

    def __post_init__(self):
        if not (self.mean > 0 and self.shape > 0):
            raise DomainError(
                f"IG parameters must be positive, got mean={self.mean}, "
                f"shape={self.shape}")


class VarianceGrowth(str, Enum):
    DIVERGES_OVER_T = "diverges_over_t"
    DECAYS_OVER_T = "decays_over_t"


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _log_normal_cdf(x: float) -> float:
    """log Phi(x), stable deep in the left tail."""
    if x > -8.0:
        return math.log(normal_cdf(x))
    # asymptotic expansion of Phi(x) ~ phi(x)/|x| * (1 - 1/x^2 + 3/x^4)
    log_phi = -0.5 * x * x - 0.5 * math.log(2.0 * math.pi)
    return log_phi - math.log(-x) + math.log1p(-1.0 / (x * x) + 3.0 / x ** 4)


def ig_cdf(x: float, ig: IGParams) -> float:
    """CDF of the Inverse Gaussian distribution.

    F(x) = Phi(sqrt(shape/x)(x/mean - 1))
         + exp(2 shape/mean) Phi(-sqrt(shape/x)(x/mean + 1)).

    The second term is evaluated in log-space so large shape/mean ratios
    do not overflow.
    """
    if x < 0:
        raise DomainError(f"ig_cdf argument must be >= 0, got {x}")
    if x == 0:
        return 0.0
    a = math.sqrt(ig.shape / x)
    term1 = normal_cdf(a * (x / ig.mean - 1.0))
    log_term2 = 2.0 * ig.shape / ig.mean + _log_normal_cdf(
        -a * (x / ig.mean + 1.0))
    return min(1.0, term1 + math.exp(log_term2))


def ig_pdf(x: float, ig: IGParams) -> float:
    """Density of the Inverse Gaussian distribution (used by oracles)."""
    if x <= 0:
        return 0.0
    return math.sqrt(ig.shape / (2.0 * math.pi * x ** 3)) * math.exp(
        -ig.shape * (x - ig.mean) ** 2 / (2.0 * ig.mean ** 2 * x))


def hitting_time_law(fp: FirstPassageProblem) -> Optional[IGParams]:
    """IG(m/mu, m^2) when the hit is almost sure (mu > 0), else None."""
    if fp.mu > 0 and fp.m > 0:
        return IGParams(mean=fp.m / fp.mu, shape=fp.m ** 2)
    return None


def laplace_first_passage(fp: FirstPassageProblem, r: float) -> float:
    """E[exp(-r tau_m)] = exp(m mu - m sqrt(2r + mu^2)) for m > 0, r > 0."""
    if fp.m <= 0:
        raise DomainError(
            f"first-passage level m must be > 0 (reflect first), got {fp.m}")
    if r <= 0:
        raise DomainError(f"transform rate r must be > 0, got {r}")
    return math.exp(fp.m * fp.mu - fp.m * math.sqrt(2.0 * r + fp.mu ** 2))


def _const_barrier_problem(params: ModelParams, barrier: float
                           ) -> FirstPassageProblem:
    if barrier <= params.s0:
        raise DomainError(
            f"barrier must exceed s0={params.s0}, got {barrier}")
    return FirstPassageProblem(
        mu=(params.alpha - 0.5 * params.sigma ** 2) / params.sigma,
        m=math.log(barrier / params.s0) / params.sigma)


def const_barrier_expected_profit_limit(params: ModelParams,
                                        barrier: float) -> float:
    """lim E[v(t)] = B E[e^{-r_f tau}] - S0 for the sell-at-B strategy."""
    fp = _const_barrier_problem(params, barrier)
    if fp.mu <= 0:
        raise DomainError(
            "expected-profit limit requires alpha > sigma^2/2 "
            f"(drift mu={fp.mu:.6g} must be positive)")
    return barrier * laplace_first_passage(fp, params.r_f) - params.s0


def const_barrier_variance_limit(params: ModelParams, barrier: float) -> float:
    """lim var(v(t)) = B^2 (L(2 r_f) - L(r_f)^2), L the hit-time Laplace
    transform."""
    fp = _const_barrier_problem(params, barrier)
    if fp.mu <= 0:
        raise DomainError(
            "variance limit requires alpha > sigma^2/2 "
            f"(drift mu={fp.mu:.6g} must be positive)")
    if params.r_f == 0:
        return 0.0
    l1 = laplace_first_passage(fp, params.r_f)
    l2 = laplace_first_passage(fp, 2.0 * params.r_f)
    return barrier ** 2 * (l2 - l1 ** 2)


def const_barrier_loss_prob_limit(params: ModelParams, barrier: float) -> float:
    """lim P(v(t) < 0) = P(tau > sigma m / r_f) = 1 - F_IG(sigma m / r_f)."""
    fp = _const_barrier_problem(params, barrier)
    if fp.mu <= 0:
        raise DomainError(
            "loss-probability limit requires alpha > sigma^2/2 "
            f"(drift mu={fp.mu:.6g} must be positive)")
    if params.r_f <= 0:
        raise DomainError("loss-probability limit requires r_f > 0")
    ig = IGParams(mean=fp.m / fp.mu, shape=fp.m ** 2)
    threshold = params.sigma * fp.m / params.r_f
    return 1.0 - ig_cdf(threshold, ig)


def barrier_sensitivities(params: ModelParams, barrier: float):
    """(d/dB) of the hit-time discount factor and of the profit limit.

    dL/dB   = (mu - sqrt(2 r_f + mu^2)) / sigma * L / B          (< 0)
    dE[v]/dB = (sigma + mu - sqrt(2 r_f + mu^2)) / sigma
               * (B/S0)^{(mu - sqrt(2 r_f + mu^2))/sigma}        (> 0 for
                                                                  alpha > r_f)
    """
    fp = _const_barrier_problem(params, barrier)
    if fp.mu <= 0:
        raise DomainError(
            "sensitivities require alpha > sigma^2/2 "
            f"(drift mu={fp.mu:.6g} must be positive)")
    if params.alpha <= params.r_f:
        raise DomainError("sensitivities require alpha > r_f")
    c = (fp.mu - math.sqrt(2.0 * params.r_f + fp.mu ** 2)) / params.sigma
    lap = laplace_first_passage(fp, params.r_f)
    d_laplace_db = c * lap / barrier
    d_profit_db = (1.0 + c) * (barrier / params.s0) ** c
    return d_laplace_db, d_profit_db


def buyhold_mean(params: ModelParams, t: float) -> float:
    """E[v(t)] = S0 (e^{(alpha - r_f) t} - 1) for buy-and-hold."""
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    return params.s0 * math.expm1((params.alpha - params.r_f) * t)


def buyhold_variance(params: ModelParams, t: float) -> float:
    """var(v(t)) = (e^{sigma^2 t} - 1) S0^2 e^{2 (alpha - r_f) t}."""
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    return (math.expm1(params.sigma ** 2 * t) * params.s0 ** 2
            * math.exp(2.0 * (params.alpha - params.r_f) * t))


def buyhold_loss_prob(params: ModelParams, t: float) -> float:
    """P(v(t) < 0) = Phi(-nu sqrt(t)) with nu = (alpha - r_f - sigma^2/2)/sigma."""
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    if t == 0:
        return 0.0
    nu = (params.alpha - params.r_f - 0.5 * params.sigma ** 2) / params.sigma
    return normal_cdf(-nu * math.sqrt(t))


def variance_growth_class(params: ModelParams) -> VarianceGrowth:
    """Time-averaged buy-and-hold variance diverges iff alpha - r_f > -sigma^2/2."""
    if params.alpha - params.r_f > -0.5 * params.sigma ** 2:
        return VarianceGrowth.DIVERGES_OVER_T
    return VarianceGrowth.DECAYS_OVER_T


def _det_barrier_drift_level(params: ModelParams, k: float):
    if k <= 0:
        raise DomainError(f"barrier fraction k must be > 0, got {k}")
    nu = (params.alpha - params.r_f - 0.5 * params.sigma ** 2) / params.sigma
    k_star = math.log1p(k) / params.sigma
    return nu, k_star


def joint_max_loss_prob(nu: float, level: float, t: float) -> float:
    """P(X_t <= 0, max_{s<=t} X_s <= level) for X_t = nu t + W_t, level > 0.

    Reflection-principle joint law:
    Phi(-nu sqrt(t)) - e^{2 nu level} Phi((-2 level - nu t)/sqrt(t)).
    """
    if t <= 0:
        raise DomainError(f"time must be > 0, got {t}")
    sq = math.sqrt(t)
    # reflected term in log domain: e^{2 nu level} can overflow while the
    # product with the far-tail Phi still underflows to ~0
    log_term = 2.0 * nu * level + _log_normal_cdf((-2.0 * level - nu * t) / sq)
    term = math.exp(log_term) if log_term < 0 else math.inf
    p = normal_cdf(-nu * sq) - term
    return min(1.0, max(0.0, p))


def det_barrier_loss_prob(params: ModelParams, k: float, t: float) -> float:
    """P(v(t) < 0) for the long position stopped at S0 (1+k) e^{r_f t}.

    A loss at t means the discounted price sits below S0 while the barrier
    was never reached; both events are resolved jointly through the running
    maximum of the drifted Brownian motion.
    """
    nu, k_star = _det_barrier_drift_level(params, k)
    return joint_max_loss_prob(nu, k_star, t)


def short_det_barrier_loss_prob(params: ModelParams, k: float,
                                t: float) -> float:
    """Loss probability of the short variant: the reflected drift problem."""
    nu, k_star = _det_barrier_drift_level(params, k)
    return joint_max_loss_prob(-nu, k_star, t)


def det_barrier_loss_prob_limit(params: ModelParams, k: float) -> float:
    """Limit of the loss probability: 0 when the barrier is hit almost
    surely (nu >= 0), else 1 - e^{2 k* nu}."""
    nu, k_star = _det_barrier_drift_level(params, k)
    if nu >= 0:
        return 0.0
    return -math.expm1(2.0 * k_star * nu)


def short_det_barrier_loss_prob_limit(params: ModelParams, k: float) -> float:
    nu, k_star = _det_barrier_drift_level(params, k)
    if nu <= 0:
        return 0.0
    return -math.expm1(-2.0 * k_star * nu)


@dataclass(frozen=True)
class AnalyticReport:
    """Closed-form summary for one (params, strategy) pair.

    Fields that a parameter regime does not define are None (e.g. the IG
    law when the barrier is not hit almost surely).
    """

    strategy_kind: str
    expected_profit_limit: Optional[float]
    variance_limit: Optional[float]
    loss_prob_limit: Optional[float]
    laplace_at_rf: Optional[float]
    ig: Optional[IGParams]
    d_laplace_db: Optional[float]
    d_profit_db: Optional[float]
    variance_growth: str


def analytic_report(params: ModelParams, strategy) -> AnalyticReport:
    """Aggregate every closed form that applies to the given strategy."""
    from .model import to_first_passage
    from .strategies import StrategyKind

    growth = variance_growth_class(params).value
    kind = strategy.kind

    if kind == StrategyKind.BUY_HOLD:
        return AnalyticReport(
            strategy_kind=kind.value, expected_profit_limit=None,
            variance_limit=None, loss_prob_limit=None, laplace_at_rf=None,
            ig=None, d_laplace_db=None, d_profit_db=None,
            variance_growth=growth)

    fp = to_first_passage(params, strategy)
    lap = laplace_first_passage(fp, params.r_f) if params.r_f > 0 else None
    ig = hitting_time_law(fp)

    if kind == StrategyKind.LONG_CONST_BARRIER:
        b = strategy.barrier
        if fp.mu > 0:
            profit = const_barrier_expected_profit_limit(params, b)
            variance = const_barrier_variance_limit(params, b)
            loss = (const_barrier_loss_prob_limit(params, b)
                    if params.r_f > 0 else None)
        else:
            profit = variance = loss = None
        sens = (barrier_sensitivities(params, b)
                if fp.mu > 0 and params.alpha > params.r_f else (None, None))
        return AnalyticReport(
            strategy_kind=kind.value, expected_profit_limit=profit,
            variance_limit=variance, loss_prob_limit=loss,
            laplace_at_rf=lap, ig=ig, d_laplace_db=sens[0],
            d_profit_db=sens[1], variance_growth=growth)

    if kind == StrategyKind.LONG_DET_BARRIER:
        almost_sure = fp.mu > 0
        return AnalyticReport(
            strategy_kind=kind.value,
            expected_profit_limit=params.s0 * strategy.k if almost_sure
            else None,
            variance_limit=0.0 if almost_sure else None,
            loss_prob_limit=det_barrier_loss_prob_limit(params, strategy.k),
            laplace_at_rf=lap, ig=ig, d_laplace_db=None, d_profit_db=None,
            variance_growth=growth)

    if kind == StrategyKind.SHORT_DET_BARRIER:
        almost_sure = fp.mu > 0
        return AnalyticReport(
            strategy_kind=kind.value,
            expected_profit_limit=(
                params.s0 * strategy.k / (1.0 + strategy.k) if almost_sure
                else None),
            variance_limit=0.0 if almost_sure else None,
            loss_prob_limit=short_det_barrier_loss_prob_limit(
                params, strategy.k),
            laplace_at_rf=lap, ig=ig, d_laplace_db=None, d_profit_db=None,
            variance_growth=growth)

    raise DomainError(f"unknown strategy kind: {kind}")
