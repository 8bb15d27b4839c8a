"""Statistical-arbitrage classification, empirical condition checks, and
two-strategy minimum-variance portfolio math.

A parameter set admits a barrier statistical arbitrage iff
alpha - r_f != sigma^2/2: the long family above the threshold, the short
family below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from .errors import ConfigurationError, DomainError
from .harness import EstimateSeries, HorizonEstimate, _histogram
from .model import ModelParams


class ArbVerdict(str, Enum):
    LONG_STAT_ARB = "long_stat_arb"
    SHORT_STAT_ARB = "short_stat_arb"
    NO_BARRIER_STAT_ARB = "no_barrier_stat_arb"


@dataclass(frozen=True)
class ArbClassification:
    verdict: ArbVerdict
    margin: float
    note: str


def classify(params: ModelParams) -> ArbClassification:
    """Sign of alpha - r_f - sigma^2/2 decides the strategy family."""
    margin = params.alpha - params.r_f - 0.5 * params.sigma ** 2
    if margin > 0:
        return ArbClassification(
            ArbVerdict.LONG_STAT_ARB, margin,
            "long-until-barrier strategies are statistical arbitrage")
    if margin < 0:
        return ArbClassification(
            ArbVerdict.SHORT_STAT_ARB, margin,
            "short-until-barrier strategies are statistical arbitrage")
    return ArbClassification(
        ArbVerdict.NO_BARRIER_STAT_ARB, margin,
        "boundary case: neither barrier family qualifies")


@dataclass(frozen=True)
class ToleranceSet:
    """Finite-sample stand-ins for the limiting conditions."""

    loss: float = 0.005          # max loss probability at the longest horizon
    var_rel: float = 1e-3        # var/t at the end relative to its first value
    mean_se_mult: float = 3.0    # mean must clear this many SEs above zero


@dataclass(frozen=True)
class DefinitionVerdict:
    c1_zero_start: bool
    c2_positive_mean: bool
    c3_loss_decay: bool
    c4_var_over_t_decay: bool
    c4_required: bool
    overall: bool
    evidence: dict


def check_definition(series, tol: ToleranceSet = ToleranceSet()
                     ) -> DefinitionVerdict:
    """Empirically test the four statistical-arbitrage conditions.

    Accepts an EstimateSeries or a plain sequence of HorizonEstimate rows
    (e.g. re-read from estimates.csv).  The time-averaged-variance decay
    is only required when some horizon shows a positive loss probability.
    """
    if isinstance(series, EstimateSeries):
        rows: Sequence[HorizonEstimate] = series.rows
        c1 = series.zero_start_verified
    else:
        rows = list(series)
        c1 = True  # v(0) = 0 is enforced at evaluation time
    if len(rows) < 3:
        raise ConfigurationError(
            f"check_definition needs >= 3 horizons, got {len(rows)}")

    last = rows[-1]
    c2 = (last.mean > tol.mean_se_mult * last.se_mean
          if last.se_mean > 0 else last.mean > 0)

    tail_losses = [r.loss_prob for r in rows[-3:]]
    c3 = (last.loss_prob <= tol.loss
          and all(a >= b for a, b in zip(tail_losses, tail_losses[1:])))

    c4_required = any(r.loss_prob > 0 for r in rows)
    tail_vot = [r.var_over_t for r in rows[-3:]]
    c4 = (last.var_over_t <= tol.var_rel * rows[0].var_over_t
          and all(a >= b for a, b in zip(tail_vot, tail_vot[1:])))

    overall = c1 and c2 and c3 and (c4 or not c4_required)
    evidence = {
        "mean_last": last.mean, "se_mean_last": last.se_mean,
        "loss_tail": tail_losses, "loss_tol": tol.loss,
        "var_over_t_first": rows[0].var_over_t,
        "var_over_t_tail": tail_vot,
    }
    return DefinitionVerdict(c1, c2, c3, c4, c4_required, overall, evidence)


@dataclass(frozen=True)
class CantelliRow:
    horizon: float
    applicable: bool
    bound: Optional[float]
    loss_prob: float
    se_loss: float
    ok: bool


def cantelli_check(series: EstimateSeries,
                   se_mult: float = 3.0) -> List[CantelliRow]:
    """One-sided Chebyshev sanity check at horizons with positive mean.

    The empirical loss probability must not exceed
    var / (var + mean^2) by more than se_mult standard errors.
    """
    out = []
    for row in series.rows:
        if row.mean > 0:
            bound = row.var / (row.var + row.mean ** 2) if (
                row.var > 0 or row.mean != 0) else 0.0
            ok = row.loss_prob <= bound + se_mult * row.se_loss
            out.append(CantelliRow(row.horizon, True, bound, row.loss_prob,
                                   row.se_loss, ok))
        else:
            out.append(CantelliRow(row.horizon, False, None, row.loss_prob,
                                   row.se_loss, True))
    return out


@dataclass(frozen=True)
class PortfolioWeights:
    a_hat: float
    sigma1: float
    sigma2: float
    rho: float

    @property
    def combined_variance(self) -> float:
        a = self.a_hat
        return (a ** 2 * self.sigma1 ** 2 + (1 - a) ** 2 * self.sigma2 ** 2
                + 2 * a * (1 - a) * self.rho * self.sigma1 * self.sigma2)


def min_variance_weights(sigma1: float, sigma2: float,
                         rho: float) -> PortfolioWeights:
    """Weight on the first strategy minimizing the two-strategy variance.

    a_hat = (sigma2^2 - rho sigma1 sigma2) / (sigma1^2 + sigma2^2
            - 2 rho sigma1 sigma2), clamped to [0, 1].
    """
    if sigma1 <= 0 or sigma2 <= 0:
        raise DomainError(
            f"standard deviations must be positive, got {sigma1}, {sigma2}")
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"correlation must lie in [-1, 1], got {rho}")
    denom = sigma1 ** 2 + sigma2 ** 2 - 2.0 * rho * sigma1 * sigma2
    if denom <= 1e-300:
        raise DomainError(
            "degenerate portfolio: sigma1 = sigma2 with rho = 1 leaves the "
            "variance independent of the weight")
    a_hat = (sigma2 ** 2 - rho * sigma1 * sigma2) / denom
    return PortfolioWeights(a_hat=min(1.0, max(0.0, a_hat)), sigma1=sigma1,
                            sigma2=sigma2, rho=rho)


def combine_series(s1: EstimateSeries, s2: EstimateSeries,
                   a: float) -> EstimateSeries:
    """Path-paired linear combination a*v1 + (1-a)*v2 of two ensembles.

    Both inputs must share the grid, horizons, and path count; the
    combined ensemble gets fresh empirical statistics and no analytic
    counterparts.
    """
    if s1.horizons != s2.horizons:
        raise DomainError(
            f"horizon mismatch: {s1.horizons} vs {s2.horizons}")
    if s1.terminal_values.shape != s2.terminal_values.shape:
        raise DomainError(
            f"path count mismatch: {s1.terminal_values.shape} vs "
            f"{s2.terminal_values.shape}")
    if s1.config.steps_per_year != s2.config.steps_per_year:
        raise DomainError("steps_per_year mismatch")

    combined = a * s1.terminal_values + (1.0 - a) * s2.terminal_values
    n = combined.shape[0]
    rows = []
    histograms = {}
    for j, h in enumerate(s1.horizons):
        col = combined[:, j]
        mean = float(col.mean())
        var = float(col.var(ddof=1))
        loss = float((col < 0).mean())
        rows.append(HorizonEstimate(
            horizon=h, mean=mean, se_mean=math.sqrt(var / n), var=var,
            var_over_t=var / h, loss_prob=loss,
            se_loss=math.sqrt(loss * (1.0 - loss) / n),
            analytic_mean=None, analytic_loss_prob=None))
        histograms[h] = _histogram(col)
    return EstimateSeries(
        config=s1.config, rows=rows, terminal_values=combined,
        histograms=histograms,
        zero_start_verified=s1.zero_start_verified and s2.zero_start_verified)
