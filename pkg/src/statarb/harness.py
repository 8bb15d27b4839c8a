"""Monte Carlo experiment runner.

One path set is simulated to the longest horizon and every shorter horizon
is read off the same paths (common random numbers).  Work is partitioned
into fixed-size path blocks whose results are keyed by path range, so the
assembled estimates are bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import analytics
from .errors import ConfigurationError
from .model import ModelParams, PathGrid, to_first_passage
from .strategies import StrategyKind, StrategySpec, terminal_values_block

_BLOCK_SIZE = 512  # paths per block; fixed so partitioning never depends on workers
_HIST_BINS = 60


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams
    strategy: StrategySpec
    horizons: Tuple[float, ...]
    paths: int
    steps_per_year: int
    seed: int
    bridge_correction: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.paths < 100:
            raise ConfigurationError(
                f"paths must be >= 100, got {self.paths}")
        hs = tuple(self.horizons)
        if len(hs) == 0 or any(b <= a for a, b in zip(hs, hs[1:])):
            raise ConfigurationError(
                f"horizons must be strictly increasing, got {hs}")
        object.__setattr__(self, "horizons", hs)
        # validates positivity and integer-multiple-of-dt for every horizon
        for h in hs:
            PathGrid(self.steps_per_year, h)
        self.strategy.validate_against(self.params)

    @property
    def grid(self) -> PathGrid:
        return PathGrid(self.steps_per_year, self.horizons[-1])


@dataclass(frozen=True)
class HorizonEstimate:
    horizon: float
    mean: float
    se_mean: float
    var: float
    var_over_t: float
    loss_prob: float
    se_loss: float
    analytic_mean: Optional[float]
    analytic_loss_prob: Optional[float]


@dataclass
class EstimateSeries:
    """Per-horizon Monte Carlo estimates plus the raw terminal values.

    ``terminal_values`` has shape (paths, horizons); histograms map each
    horizon to (bin_centers, counts) arrays.
    """

    config: ExperimentConfig
    rows: List[HorizonEstimate]
    terminal_values: np.ndarray
    histograms: Dict[float, Tuple[np.ndarray, np.ndarray]]
    zero_start_verified: bool = True

    @property
    def horizons(self) -> Tuple[float, ...]:
        return self.config.horizons


def _simulate_block(config: ExperimentConfig,
                    block: Tuple[int, int]) -> np.ndarray:
    """Terminal v for paths [start, stop) at every horizon."""
    from .model import simulate_log_chunk

    grid = config.grid
    times = grid.times()
    start, stop = block
    log_s = simulate_log_chunk(config.params, grid, config.seed,
                               range(start, stop))
    disc_log = log_s - config.params.r_f * times
    h_idx = np.array([int(round(h * config.steps_per_year))
                      for h in config.horizons])
    if config.bridge_correction:
        disc_log = _apply_bridge_hits(config, disc_log, times, start)
    return terminal_values_block(config.strategy, config.params, disc_log,
                                 times, h_idx)


def _apply_bridge_hits(config: ExperimentConfig, disc_log: np.ndarray,
                       times: np.ndarray, start: int) -> np.ndarray:
    """Force a grid touch at the first sampled intra-step crossing.

    Reuses the single-path bridge sampler with a per-path counter-based
    stream so the correction is as reproducible as the paths themselves.
    """
    from .strategies import _barrier_hit_mask, _bridge_crossings

    strategy, params = config.strategy, config.params
    out = disc_log.copy()
    for row in range(len(disc_log)):
        rng = np.random.Generator(np.random.Philox(
            key=np.array([config.seed ^ 0x62726964, start + row],
                         dtype=np.uint64)))
        crossings = _bridge_crossings(strategy, params, disc_log[row], times,
                                      rng)
        if not crossings.any():
            continue
        cross_idx = int(np.argmax(crossings)) + 1
        cond = _barrier_hit_mask(strategy, params, disc_log[row], times)
        grid_idx = int(np.argmax(cond)) if cond.any() else len(times)
        if cross_idx < grid_idx:
            # pin the path to the barrier at the post-crossing grid point
            if strategy.kind == StrategyKind.LONG_CONST_BARRIER:
                out[row, cross_idx] = (math.log(strategy.barrier / params.s0)
                                       - params.r_f * times[cross_idx])
            elif strategy.kind == StrategyKind.LONG_DET_BARRIER:
                out[row, cross_idx] = math.log1p(strategy.k)
            else:
                out[row, cross_idx] = -math.log1p(strategy.k)
    return out


def _analytic_counterparts(config: ExperimentConfig
                           ) -> Tuple[List[Optional[float]],
                                      List[Optional[float]]]:
    """Closed-form mean and loss probability per horizon, where defined.

    Barrier strategies carry their limiting mean (the quantity the
    estimates converge to); the growing-barrier strategies also get the
    exact finite-horizon loss probability.
    """
    params, strategy = config.params, config.strategy
    means: List[Optional[float]] = []
    losses: List[Optional[float]] = []
    if strategy.kind == StrategyKind.BUY_HOLD:
        for h in config.horizons:
            means.append(analytics.buyhold_mean(params, h))
            losses.append(analytics.buyhold_loss_prob(params, h))
        return means, losses

    fp = to_first_passage(params, strategy)
    if strategy.kind == StrategyKind.LONG_CONST_BARRIER:
        mean_lim = (analytics.const_barrier_expected_profit_limit(
            params, strategy.barrier) if fp.mu > 0 else None)
        loss_lim = (analytics.const_barrier_loss_prob_limit(
            params, strategy.barrier)
            if fp.mu > 0 and params.r_f > 0 else None)
        return [mean_lim] * len(config.horizons), \
               [loss_lim] * len(config.horizons)
    if strategy.kind == StrategyKind.LONG_DET_BARRIER:
        mean_lim = params.s0 * strategy.k if fp.mu > 0 else None
        losses = [analytics.det_barrier_loss_prob(params, strategy.k, h)
                  for h in config.horizons]
        return [mean_lim] * len(config.horizons), losses
    mean_lim = (params.s0 * strategy.k / (1.0 + strategy.k)
                if fp.mu > 0 else None)
    losses = [analytics.short_det_barrier_loss_prob(params, strategy.k, h)
              for h in config.horizons]
    return [mean_lim] * len(config.horizons), losses


def _histogram(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return np.array([lo]), np.array([len(values)])
    counts, edges = np.histogram(values, bins=_HIST_BINS, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, counts


def run_experiment(config: ExperimentConfig) -> EstimateSeries:
    """Simulate the configured experiment and estimate the tracked quantities.

    Deterministic for a fixed config and seed at any worker count.
    """
    blocks = [(s, min(s + _BLOCK_SIZE, config.paths))
              for s in range(0, config.paths, _BLOCK_SIZE)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_simulate_block, [config] * len(blocks),
                                    blocks))
    else:
        results = [_simulate_block(config, b) for b in blocks]
    terminal = np.vstack(results)

    n = config.paths
    means, losses = _analytic_counterparts(config)
    rows: List[HorizonEstimate] = []
    histograms: Dict[float, Tuple[np.ndarray, np.ndarray]] = {}
    for j, h in enumerate(config.horizons):
        col = terminal[:, j]
        mean = float(col.mean())
        var = float(col.var(ddof=1))
        loss = float((col < 0).mean())
        rows.append(HorizonEstimate(
            horizon=h, mean=mean, se_mean=math.sqrt(var / n), var=var,
            var_over_t=var / h, loss_prob=loss,
            se_loss=math.sqrt(loss * (1.0 - loss) / n),
            analytic_mean=means[j], analytic_loss_prob=losses[j]))
        histograms[h] = _histogram(col)
    return EstimateSeries(config=config, rows=rows, terminal_values=terminal,
                          histograms=histograms)


@dataclass(frozen=True)
class ComparisonRow:
    horizon: float
    quantity: str
    mc: float
    analytic: float
    abs_diff: float
    se: float
    se_ratio: float
    flagged: bool


def convergence_report(series: EstimateSeries,
                       flag_se: float = 4.0) -> List[ComparisonRow]:
    """Per-horizon |MC - analytic| comparison; flags gaps beyond flag_se SEs.

    Horizons without an analytic counterpart are skipped.
    """
    out: List[ComparisonRow] = []
    for row in series.rows:
        if row.analytic_mean is not None:
            diff = abs(row.mean - row.analytic_mean)
            ratio = diff / row.se_mean if row.se_mean > 0 else (
                0.0 if diff == 0 else math.inf)
            out.append(ComparisonRow(row.horizon, "mean", row.mean,
                                     row.analytic_mean, diff, row.se_mean,
                                     ratio, ratio > flag_se))
        if row.analytic_loss_prob is not None:
            diff = abs(row.loss_prob - row.analytic_loss_prob)
            ratio = diff / row.se_loss if row.se_loss > 0 else (
                0.0 if diff == 0 else math.inf)
            out.append(ComparisonRow(row.horizon, "loss_prob", row.loss_prob,
                                     row.analytic_loss_prob, diff,
                                     row.se_loss, ratio, ratio > flag_se))
    if not out:
        raise ConfigurationError(
            "no analytic counterparts available for comparison")
    return out
