import math
import random

import numpy as np
import pytest

from statarb.classifier import (ArbVerdict, ToleranceSet, cantelli_check,
                                check_definition, classify, combine_series,
                                min_variance_weights)
from statarb.errors import ConfigurationError, DomainError
from statarb.harness import (ExperimentConfig, HorizonEstimate,
                             run_experiment)
from statarb.model import ModelParams
from statarb.strategies import StrategyKind, StrategySpec


def test_classify_known_regimes():
    long_p = ModelParams(alpha=0.16, r_f=0.04, sigma=0.2, s0=1.0)
    short_p = ModelParams(alpha=0.01, r_f=0.05, sigma=0.2, s0=1.0)
    none_p = ModelParams(alpha=0.04 + 0.2 ** 2 / 2, r_f=0.04, sigma=0.2,
                         s0=1.0)
    assert classify(long_p).verdict == ArbVerdict.LONG_STAT_ARB
    assert classify(short_p).verdict == ArbVerdict.SHORT_STAT_ARB
    assert classify(none_p).verdict == ArbVerdict.NO_BARRIER_STAT_ARB
    assert classify(long_p).margin == pytest.approx(0.10)


def test_classify_sweep_matches_margin_sign():
    rng = random.Random(7)
    for _ in range(1000):
        alpha = rng.uniform(-0.3, 0.5)
        r_f = rng.uniform(0.0, 0.2)
        sigma = rng.uniform(0.01, 0.8)
        params = ModelParams(alpha=alpha, r_f=r_f, sigma=sigma, s0=1.0)
        margin = alpha - r_f - 0.5 * sigma ** 2
        got = classify(params)
        assert got.margin == pytest.approx(margin)
        if margin > 0:
            assert got.verdict == ArbVerdict.LONG_STAT_ARB
        elif margin < 0:
            assert got.verdict == ArbVerdict.SHORT_STAT_ARB


def row(h, mean, se, var, loss, se_loss=0.001):
    return HorizonEstimate(horizon=h, mean=mean, se_mean=se, var=var,
                           var_over_t=var / h, loss_prob=loss,
                           se_loss=se_loss, analytic_mean=None,
                           analytic_loss_prob=None)


def test_check_definition_pass():
    rows = [row(1, 0.02, 0.004, 0.01, 0.30),
            row(5, 0.045, 0.002, 0.002, 0.05),
            row(20, 0.05, 0.0005, 1e-4, 0.004),
            row(50, 0.05, 1e-4, 5e-6, 0.001)]
    verdict = check_definition(rows)
    assert verdict.overall
    assert verdict.c1_zero_start and verdict.c2_positive_mean
    assert verdict.c3_loss_decay and verdict.c4_var_over_t_decay
    assert verdict.c4_required


def test_check_definition_fails_on_loss_floor():
    # loss probability stalls above the tolerance: not a statistical arbitrage
    rows = [row(1, 0.02, 0.004, 0.01, 0.30),
            row(5, 0.04, 0.002, 0.002, 0.05),
            row(20, 0.05, 0.0005, 1e-4, 0.026),
            row(50, 0.05, 1e-4, 5e-6, 0.024)]
    verdict = check_definition(rows)
    assert not verdict.c3_loss_decay
    assert not verdict.overall


def test_check_definition_fails_on_mean():
    rows = [row(1, 0.001, 0.004, 0.01, 0.30),
            row(5, 0.002, 0.002, 0.002, 0.05),
            row(50, 0.003, 0.002, 5e-6, 0.001)]
    verdict = check_definition(rows)
    assert not verdict.c2_positive_mean and not verdict.overall


def test_check_definition_var_decay_optional_when_lossless():
    # zero loss everywhere: growing variance does not disqualify
    rows = [row(1, 0.05, 0.001, 0.01, 0.0),
            row(5, 0.3, 0.001, 0.1, 0.0),
            row(50, 3.0, 0.001, 2.0, 0.0)]
    verdict = check_definition(rows)
    assert not verdict.c4_var_over_t_decay
    assert not verdict.c4_required
    assert verdict.overall


def test_check_definition_nonmonotone_tail_rejected():
    rows = [row(1, 0.02, 0.004, 0.01, 0.004),
            row(5, 0.045, 0.002, 0.002, 0.001),
            row(20, 0.05, 0.0005, 1e-4, 0.003),
            row(50, 0.05, 1e-4, 5e-6, 0.004)]
    assert not check_definition(rows).c3_loss_decay


def test_check_definition_needs_three_horizons():
    with pytest.raises(ConfigurationError):
        check_definition([row(1, 0.05, 0.001, 0.01, 0.0),
                          row(5, 0.05, 0.001, 0.01, 0.0)])


def test_check_definition_tolerances_respected():
    rows = [row(1, 0.02, 0.004, 0.01, 0.30),
            row(5, 0.045, 0.002, 0.002, 0.05),
            row(20, 0.05, 0.0005, 1e-4, 0.009),
            row(50, 0.05, 1e-4, 5e-6, 0.008)]
    assert not check_definition(rows).c3_loss_decay
    loose = ToleranceSet(loss=0.01)
    assert check_definition(rows, loose).c3_loss_decay


def make_series(strategy, params, seed=11, paths=2000):
    cfg = ExperimentConfig(params=params, strategy=strategy,
                           horizons=(1.0, 2.0, 5.0), paths=paths,
                           steps_per_year=52, seed=seed)
    return run_experiment(cfg)


def test_cantelli_check_on_simulation():
    params = ModelParams(alpha=0.16, r_f=0.04, sigma=0.2, s0=1.0)
    series = make_series(StrategySpec(StrategyKind.LONG_DET_BARRIER, k=0.05),
                         params)
    report = cantelli_check(series)
    assert len(report) == 3
    assert all(r.ok for r in report)
    for r in report:
        if r.applicable:
            assert 0.0 <= r.bound <= 1.0


def test_min_variance_known_values():
    # uncorrelated: weights proportional to inverse variances
    w = min_variance_weights(0.1, 0.3, 0.0)
    assert w.a_hat == pytest.approx(0.9)
    # equal risks, any correlation: split evenly
    assert min_variance_weights(0.2, 0.2, 0.5).a_hat == pytest.approx(0.5)
    # rho -> 1 with sigma1 < sigma2 pushes everything onto strategy 1
    assert min_variance_weights(0.1, 0.3, 0.999).a_hat == pytest.approx(
        1.0, abs=1e-6)


def test_min_variance_grid_search_oracle():
    rng = random.Random(3)
    grid = np.linspace(0.0, 1.0, 100_001)
    for _ in range(100):
        s1 = rng.uniform(0.05, 0.5)
        s2 = rng.uniform(0.05, 0.5)
        rho = rng.uniform(-0.95, 0.95)
        w = min_variance_weights(s1, s2, rho)
        var = (grid ** 2 * s1 ** 2 + (1 - grid) ** 2 * s2 ** 2
               + 2 * grid * (1 - grid) * rho * s1 * s2)
        best = grid[int(np.argmin(var))]
        assert abs(w.a_hat - best) < 1e-3
        assert w.combined_variance <= var.min() + 1e-12


def test_min_variance_errors():
    with pytest.raises(DomainError):
        min_variance_weights(0.0, 0.2, 0.0)
    with pytest.raises(DomainError):
        min_variance_weights(0.1, 0.2, 1.5)
    with pytest.raises(DomainError):
        min_variance_weights(0.2, 0.2, 1.0)


def test_combine_series_identity_and_linearity():
    params = ModelParams(alpha=0.16, r_f=0.04, sigma=0.2, s0=1.0)
    s1 = make_series(StrategySpec(StrategyKind.LONG_DET_BARRIER, k=0.05),
                     params, seed=21)
    s2 = make_series(StrategySpec(StrategyKind.LONG_CONST_BARRIER,
                                  barrier=1.2), params, seed=21)
    full = combine_series(s1, s2, 1.0)
    np.testing.assert_array_equal(full.terminal_values, s1.terminal_values)
    half = combine_series(s1, s2, 0.5)
    np.testing.assert_allclose(
        half.terminal_values,
        0.5 * s1.terminal_values + 0.5 * s2.terminal_values)
    m1 = s1.rows[-1].mean
    m2 = s2.rows[-1].mean
    assert half.rows[-1].mean == pytest.approx(0.5 * m1 + 0.5 * m2)
    assert half.rows[-1].analytic_mean is None


def test_combine_series_variance_reduction():
    # paired combination at the optimal weight can't beat either input
    params = ModelParams(alpha=0.16, r_f=0.04, sigma=0.2, s0=1.0)
    s1 = make_series(StrategySpec(StrategyKind.LONG_DET_BARRIER, k=0.05),
                     params, seed=31)
    s2 = make_series(StrategySpec(StrategyKind.LONG_CONST_BARRIER,
                                  barrier=1.2), params, seed=31)
    v1 = s1.rows[-1].var
    v2 = s2.rows[-1].var
    rho = float(np.corrcoef(s1.terminal_values[:, -1],
                            s2.terminal_values[:, -1])[0, 1])
    w = min_variance_weights(math.sqrt(v1), math.sqrt(v2), rho)
    combined = combine_series(s1, s2, w.a_hat)
    assert combined.rows[-1].var <= min(v1, v2) + 1e-12


def test_combine_series_mismatch_errors():
    params = ModelParams(alpha=0.16, r_f=0.04, sigma=0.2, s0=1.0)
    spec = StrategySpec(StrategyKind.LONG_DET_BARRIER, k=0.05)
    s1 = make_series(spec, params, seed=41)
    cfg = ExperimentConfig(params=params, strategy=spec,
                           horizons=(1.0, 2.0, 4.0), paths=2000,
                           steps_per_year=52, seed=41)
    s2 = run_experiment(cfg)
    with pytest.raises(DomainError):
        combine_series(s1, s2, 0.5)
    cfg3 = ExperimentConfig(params=params, strategy=spec,
                            horizons=(1.0, 2.0, 5.0), paths=1000,
                            steps_per_year=52, seed=41)
    with pytest.raises(DomainError):
        combine_series(s1, run_experiment(cfg3), 0.5)
