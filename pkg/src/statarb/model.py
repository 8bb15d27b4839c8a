"""Black-Scholes world parameters, time grids, and exact GBM path simulation.

Simulation uses the exact lognormal step

    S(t+dt) = S(t) * exp((alpha - sigma^2/2) dt + sigma sqrt(dt) Z)

so the marginal law carries no discretization error.  Randomness is
counter-based: path ``i`` of a run seeded with ``seed`` draws its normals
from a Philox stream keyed by ``(seed, i)``, which makes every path
bit-reproducible regardless of execution order or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class ModelParams:
    """Constant-coefficient GBM market: dS/S = alpha dt + sigma dW, money
    market grows at r_f."""

    alpha: float
    r_f: float
    sigma: float
    s0: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not self.s0 > 0:
            raise DomainError(f"s0 must be > 0, got {self.s0}")
        if self.r_f < 0:
            raise DomainError(f"r_f must be >= 0, got {self.r_f}")


@dataclass(frozen=True)
class PathGrid:
    """Uniform time grid; horizon must be a whole number of steps."""

    steps_per_year: int
    horizon_years: float

    def __post_init__(self):
        if self.steps_per_year <= 0:
            raise ConfigurationError(
                f"steps_per_year must be positive, got {self.steps_per_year}")
        if self.horizon_years <= 0:
            raise ConfigurationError(
                f"horizon_years must be positive, got {self.horizon_years}")
        n = self.horizon_years * self.steps_per_year
        if abs(n - round(n)) > 1e-9:
            raise ConfigurationError(
                "horizon_years must be an integer multiple of dt "
                f"(got T={self.horizon_years}, M={self.steps_per_year})")

    @property
    def dt(self) -> float:
        return 1.0 / self.steps_per_year

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon_years * self.steps_per_year))

    def times(self) -> np.ndarray:
        """Grid times 0, dt, ..., T (length n_steps + 1)."""
        return np.arange(self.n_steps + 1) / self.steps_per_year


@dataclass(frozen=True)
class Path:
    """One simulated trajectory.

    ``running_max_x`` is the running maximum of the drift-adjusted process
    X(t) = ln(e^{-r_f t} S_t / S_0) / sigma used for barrier logic.
    """

    times: np.ndarray
    prices: np.ndarray
    running_max_x: np.ndarray


@dataclass(frozen=True)
class FirstPassageProblem:
    """Hitting problem for X_t = mu t + W_t reaching level m."""

    mu: float
    m: float


def _path_rng(seed: int, path_index: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, path_index)."""
    key = np.array([seed, path_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def path_normals(seed: int, path_index: int, n: int) -> np.ndarray:
    """The n standard normals that drive path ``path_index``."""
    return _path_rng(seed, path_index).standard_normal(n)


def simulate_log_chunk(params: ModelParams, grid: PathGrid, seed: int,
                       path_indices) -> np.ndarray:
    """Cumulative log-returns ln(S(t_i)/S_0) for a block of paths.

    Shape (len(path_indices), n_steps + 1) with a leading zero column.
    Each row is generated from its own counter-based stream, so the result
    is identical however the path indices are partitioned.
    """
    idx = np.asarray(path_indices, dtype=np.int64)
    n_steps = grid.n_steps
    drift = (params.alpha - 0.5 * params.sigma ** 2) * grid.dt
    vol = params.sigma * math.sqrt(grid.dt)
    out = np.empty((len(idx), n_steps + 1))
    out[:, 0] = 0.0
    for row, i in enumerate(idx):
        z = path_normals(seed, int(i), n_steps)
        np.cumsum(drift + vol * z, out=out[row, 1:])
    return out


def simulate_path(params: ModelParams, grid: PathGrid, seed: int,
                  path_index: int) -> Path:
    """Simulate one exact-in-distribution GBM path.

    Pure function of (params, grid, seed, path_index).
    """
    log_s = simulate_log_chunk(params, grid, seed, [path_index])[0]
    times = grid.times()
    prices = params.s0 * np.exp(log_s)
    x = (log_s - params.r_f * times) / params.sigma
    return Path(times=times, prices=prices,
                running_max_x=np.maximum.accumulate(x))


def to_first_passage(params: ModelParams, strategy) -> FirstPassageProblem:
    """Map a barrier strategy to its Brownian-with-drift hitting problem.

    Constant barrier B:  mu = (alpha - sigma^2/2)/sigma, m = ln(B/S0)/sigma.
    Growing barrier S0(1+k)e^{r_f t}: mu = (alpha - r_f - sigma^2/2)/sigma,
    m = ln(1+k)/sigma.  The short variant reflects the process, so the
    returned problem has mu = (sigma^2/2 - (alpha - r_f))/sigma with the
    same positive level m = ln(1+k)/sigma.
    """
    from .strategies import StrategyKind

    sigma = params.sigma
    if strategy.kind == StrategyKind.LONG_CONST_BARRIER:
        if strategy.barrier is None or strategy.barrier <= params.s0:
            raise DomainError(
                f"constant barrier must exceed s0={params.s0}, "
                f"got {strategy.barrier}")
        return FirstPassageProblem(
            mu=(params.alpha - 0.5 * sigma ** 2) / sigma,
            m=math.log(strategy.barrier / params.s0) / sigma)
    if strategy.kind == StrategyKind.LONG_DET_BARRIER:
        _require_positive_k(strategy)
        return FirstPassageProblem(
            mu=(params.alpha - params.r_f - 0.5 * sigma ** 2) / sigma,
            m=math.log1p(strategy.k) / sigma)
    if strategy.kind == StrategyKind.SHORT_DET_BARRIER:
        _require_positive_k(strategy)
        return FirstPassageProblem(
            mu=(0.5 * sigma ** 2 - (params.alpha - params.r_f)) / sigma,
            m=math.log1p(strategy.k) / sigma)
    raise DomainError(
        f"strategy {strategy.kind} has no barrier to map to a first-passage "
        "problem")


def _require_positive_k(strategy):
    if strategy.k is None or strategy.k <= 0:
        raise DomainError(f"barrier fraction k must be > 0, got {strategy.k}")
