"""The four trading strategies and their discounted cumulative profit v(t).

All positions are zero initial cost and self-financing: one unit of stock
long (or short) against the money market.  Barrier strategies freeze the
profit once the barrier is touched (exit priced exactly at the barrier,
not the overshooting grid price).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError
from .model import ModelParams, Path


class StrategyKind(str, Enum):
    BUY_HOLD = "buy_hold"
    LONG_CONST_BARRIER = "long_const_barrier"
    LONG_DET_BARRIER = "long_det_barrier"
    SHORT_DET_BARRIER = "short_det_barrier"


@dataclass(frozen=True)
class StrategySpec:
    """Which strategy to trade, with its barrier parameter.

    ``barrier`` is the constant price level B (long-until-constant-barrier
    only); ``k`` is the barrier fraction of the growing boundary
    S0 (1+k) e^{r_f t} (both deterministic-barrier kinds).
    """

    kind: StrategyKind
    barrier: Optional[float] = None
    k: Optional[float] = None

    def __post_init__(self):
        if self.kind == StrategyKind.LONG_CONST_BARRIER:
            if self.barrier is None:
                raise DomainError("long_const_barrier requires a barrier B")
        elif self.kind in (StrategyKind.LONG_DET_BARRIER,
                           StrategyKind.SHORT_DET_BARRIER):
            if self.k is None or self.k <= 0:
                raise DomainError(
                    f"barrier fraction k must be > 0, got {self.k}")

    def validate_against(self, params: ModelParams) -> None:
        if (self.kind == StrategyKind.LONG_CONST_BARRIER
                and self.barrier <= params.s0):
            raise DomainError(
                f"barrier B={self.barrier} must exceed s0={params.s0}")


@dataclass(frozen=True)
class ProfitSeries:
    """Discounted cumulative profit of one path on the grid."""

    times: np.ndarray
    v: np.ndarray
    hit_time: Optional[float]
    terminal_v: float


def _barrier_hit_mask(strategy: StrategySpec, params: ModelParams,
                      disc_log: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Boolean barrier condition per grid point.

    ``disc_log`` is ln(e^{-r_f t} S_t / S0); works on one path (1-D) or a
    block of paths (2-D, time on the last axis).
    """
    if strategy.kind == StrategyKind.LONG_CONST_BARRIER:
        return disc_log + params.r_f * times >= math.log(
            strategy.barrier / params.s0)
    if strategy.kind == StrategyKind.LONG_DET_BARRIER:
        return disc_log >= math.log1p(strategy.k)
    if strategy.kind == StrategyKind.SHORT_DET_BARRIER:
        return disc_log <= -math.log1p(strategy.k)
    raise DomainError(f"{strategy.kind} has no barrier")


def _bridge_crossings(strategy: StrategySpec, params: ModelParams,
                      disc_log: np.ndarray, times: np.ndarray,
                      rng: np.random.Generator) -> np.ndarray:
    """Sample intra-step crossings of the barrier for one path.

    Uses the Brownian-bridge crossing probability
    exp(-2 (m - x_i)(m - x_{i+1}) / dt) in the coordinates where the
    barrier is a constant level of a unit-volatility Brownian motion.
    """
    sigma = params.sigma
    if strategy.kind == StrategyKind.LONG_CONST_BARRIER:
        x = (disc_log + params.r_f * times) / sigma
        m = math.log(strategy.barrier / params.s0) / sigma
    elif strategy.kind == StrategyKind.LONG_DET_BARRIER:
        x = disc_log / sigma
        m = math.log1p(strategy.k) / sigma
    else:
        x = -disc_log / sigma
        m = math.log1p(strategy.k) / sigma
    dt = times[1] - times[0]
    d0 = m - x[:-1]
    d1 = m - x[1:]
    prob = np.where((d0 > 0) & (d1 > 0), np.exp(-2.0 * d0 * d1 / dt), 1.0)
    return rng.random(len(prob)) < prob


def detect_hit(path: Path, strategy: StrategySpec, params: ModelParams,
               bridge_rng: Optional[np.random.Generator] = None
               ) -> Optional[float]:
    """First grid time at which the barrier condition holds, else None.

    With ``bridge_rng`` given, intra-step crossings are additionally
    sampled per interval; a sampled crossing in (t_i, t_{i+1}) reports
    t_{i+1}, the first monitoring time after the crossing.
    """
    strategy.validate_against(params)
    disc_log = np.log(path.prices / params.s0) - params.r_f * path.times
    cond = _barrier_hit_mask(strategy, params, disc_log, path.times)
    if bridge_rng is not None:
        crossings = _bridge_crossings(strategy, params, disc_log, path.times,
                                      bridge_rng)
        cond = cond.copy()
        cond[1:] |= crossings
    idx = int(np.argmax(cond))
    if not cond[idx]:
        return None
    return float(path.times[idx])


def evaluate(strategy: StrategySpec, path: Path,
             params: ModelParams) -> ProfitSeries:
    """Discounted cumulative profit series of one path under a strategy."""
    strategy.validate_against(params)
    times = path.times
    discounted = path.prices * np.exp(-params.r_f * times)

    if strategy.kind == StrategyKind.BUY_HOLD:
        v = discounted - params.s0
        return ProfitSeries(times=times, v=v, hit_time=None,
                            terminal_v=float(v[-1]))

    hit_time = detect_hit(path, strategy, params)
    if strategy.kind == StrategyKind.SHORT_DET_BARRIER:
        v = params.s0 - discounted
        frozen = params.s0 * strategy.k / (1.0 + strategy.k)
    else:
        v = discounted - params.s0
        if strategy.kind == StrategyKind.LONG_CONST_BARRIER:
            frozen = None if hit_time is None else (
                strategy.barrier * math.exp(-params.r_f * hit_time)
                - params.s0)
        else:
            frozen = params.s0 * strategy.k
    if hit_time is not None:
        v = v.copy()
        v[times >= hit_time] = frozen
    return ProfitSeries(times=times, v=v, hit_time=hit_time,
                        terminal_v=float(v[-1]))


def terminal_values_block(strategy: StrategySpec, params: ModelParams,
                          disc_log: np.ndarray, times: np.ndarray,
                          horizon_indices: np.ndarray) -> np.ndarray:
    """Terminal v at each horizon for a block of paths.

    ``disc_log`` has shape (n_paths, n_grid) and holds
    ln(e^{-r_f t} S_t / S0).  Returns shape (n_paths, n_horizons).
    Agrees bit-for-bit with per-path ``evaluate``.
    """
    strategy.validate_against(params)
    horizon_indices = np.asarray(horizon_indices)
    live_sign = -1.0 if strategy.kind == StrategyKind.SHORT_DET_BARRIER else 1.0
    live = live_sign * (params.s0 * np.exp(disc_log[:, horizon_indices])
                        - params.s0)
    if strategy.kind == StrategyKind.BUY_HOLD:
        return live

    cond = _barrier_hit_mask(strategy, params, disc_log, times)
    hit_idx = np.argmax(cond, axis=1)
    has_hit = cond[np.arange(len(cond)), hit_idx]

    if strategy.kind == StrategyKind.LONG_CONST_BARRIER:
        frozen = (strategy.barrier * np.exp(-params.r_f * times[hit_idx])
                  - params.s0)
    elif strategy.kind == StrategyKind.LONG_DET_BARRIER:
        frozen = np.full(len(cond), params.s0 * strategy.k)
    else:
        frozen = np.full(len(cond),
                         params.s0 * strategy.k / (1.0 + strategy.k))

    out = np.empty_like(live)
    for j, h_idx in enumerate(horizon_indices):
        use_frozen = has_hit & (hit_idx <= h_idx)
        out[:, j] = np.where(use_frozen, frozen, live[:, j])
    return out
