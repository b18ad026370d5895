import math

import numpy as np
import pytest

from copmmd.errors import ConfigError
from copmmd.inference import (bound_threshold, independence_test_bound,
                              independence_test_permutation)
from copmmd.kernel import GaussianKernel, LaplaceKernel

from .conftest import tie_free

# Evaluated independently with mpmath at 30 digits.
BOUND_300_D2 = 0.832694284203835618


def test_too_few_permutations():
    with pytest.raises(ConfigError):
        independence_test_permutation(np.random.default_rng(0).random((20, 2)), num_permutations=18)


def test_perfect_dependence_minimum_p_value(rng):
    x = rng.normal(size=200)
    res = independence_test_permutation(np.column_stack([x, x]), GaussianKernel(1.0), 199, 0.05, 3)
    assert res.p_value == 1 / 200 == 0.005
    assert res.reject
    assert res.statistic_kind == "semi_analytic_u_squared"
    assert len(res.null_statistics) == 199


def test_independent_data_usually_not_rejected():
    rejections = 0
    for s in range(40):
        X = np.random.default_rng([7, s]).random((60, 2))
        rejections += independence_test_permutation(X, GaussianKernel(0.5), 19, 0.05, s).reject
    assert rejections <= 8


def test_p_value_formula(rng):
    X = tie_free(rng, 40, 2)
    res = independence_test_permutation(X, GaussianKernel(0.5), 49, 0.1, 4)
    exceed = sum(v >= res.statistic for v in res.null_statistics)
    assert res.p_value == (1 + exceed) / 50
    assert res.reject == (res.p_value <= 0.1)


def test_permutation_test_is_reproducible(rng):
    X = tie_free(rng, 50, 3)
    a = independence_test_permutation(X, seed=8, num_permutations=29)
    b = independence_test_permutation(X, seed=8, num_permutations=29)
    assert a == b


def test_laplace_uses_monte_carlo_statistic(rng):
    x = rng.normal(size=80)
    res = independence_test_permutation(np.column_stack([x, x ** 3]), LaplaceKernel(0.5), 19)
    assert res.statistic_kind == "u_squared" and res.p_value == 0.05


def test_bound_threshold_regression_value():
    v = bound_threshold(300, 300, 2, 1.0, math.exp(-0.5))
    lip = (8 * 2 * math.exp(-1) / 300 * math.log(4 * 2 * 300 ** 2)) ** 0.25
    bnd = (2 * 600 / 90000 * math.log(4 * 300 ** 2)) ** 0.5
    assert v == pytest.approx(max(lip, bnd) + 2 * math.sqrt(1 / 300), rel=1e-15)
    assert v == pytest.approx(BOUND_300_D2, rel=1e-14)


def test_bound_threshold_shrinks_with_m():
    vals = [bound_threshold(m, m, 2, 1.0, 0.6) for m in (100, 1000, 10000, 100000)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_bound_threshold_small_k_limit():
    # With K -> 0 only the Lipschitz term survives.
    m, d, L = 500, 3, 0.4
    lip = (8 * d * L * L / m * math.log(4 * d * m * m)) ** 0.25
    assert bound_threshold(m, m, d, 1e-300, L) == pytest.approx(lip, rel=1e-12)
    with pytest.raises(ConfigError):
        bound_threshold(m, m, d, 0.0, L)


def test_bound_test_has_no_p_value(rng):
    res = independence_test_bound(tie_free(rng, 100, 2), GaussianKernel(1.0))
    assert res.p_value is None and res.threshold > 0
    assert res.to_dict()["p_value"] is None
