"""Barrier-stopped trading strategies under geometric Brownian motion:
closed-form analytics, Monte Carlo estimation, and statistical-arbitrage
classification."""

__version__ = "0.1.0"

from .errors import ConfigurationError, DomainError, StatArbError
from .model import (FirstPassageProblem, ModelParams, Path, PathGrid,
                    simulate_path, to_first_passage)
from .strategies import ProfitSeries, StrategyKind, StrategySpec

__all__ = [
    "ConfigurationError", "DomainError", "StatArbError",
    "FirstPassageProblem", "ModelParams", "Path", "PathGrid",
    "simulate_path", "to_first_passage",
    "ProfitSeries", "StrategyKind", "StrategySpec",
    "__version__",
]
