import math

import numpy as np
import pytest

from copmmd.errors import ConfigError, NumericalInconsistencyError
from copmmd.kernel import GaussianKernel, LaplaceKernel
from copmmd.mmd import clamped, mmd_biased, mmd_biased_sq, mmd_unbiased_sq


def _brute_biased_sq(k, xs, ys):
    m, n = len(xs), len(ys)
    kxx = sum(k.eval(a, b) for a in xs for b in xs)
    kyy = sum(k.eval(a, b) for a in ys for b in ys)
    kxy = sum(k.eval(a, b) for a in xs for b in ys)
    return kxx / m ** 2 + kyy / n ** 2 - 2 * kxy / (m * n)


def _brute_h(k, x, y, i, j):
    return k.eval(x[i], x[j]) + k.eval(y[i], y[j]) - k.eval(x[i], y[j]) - k.eval(x[j], y[i])


def test_biased_identical_sets():
    x = np.random.default_rng(0).random((20, 2))
    assert mmd_biased(GaussianKernel(1.0), x, x) == 0.0


def test_biased_single_points():
    k = GaussianKernel(0.7)
    a, b = np.array([[0.1, 0.4]]), np.array([[0.8, 0.3]])
    assert mmd_biased(k, a, b) == pytest.approx(math.sqrt(2 - 2 * k.eval(a[0], b[0])), rel=1e-14)


def test_biased_hand_example():
    # Brute-force triple sum: sqrt((2 + 2e^{-1/2})/4 + 1 - 2e^{-1/8}).
    k = GaussianKernel(1.0)
    assert mmd_biased(k, [[0.0], [1.0]], [[0.5]]) == pytest.approx(0.1956310933546242, rel=1e-14)


@pytest.mark.parametrize("kernel", [GaussianKernel(0.4), LaplaceKernel(0.6)])
def test_biased_matches_brute_force(kernel):
    g = np.random.default_rng(1)
    xs, ys = g.random((15, 3)), g.random((11, 3))
    assert mmd_biased_sq(kernel, xs, ys) == pytest.approx(_brute_biased_sq(kernel, xs, ys), rel=1e-12)


def test_biased_negative_radicand_is_rejected():
    class Broken(GaussianKernel):
        def cross_sum(self, a, b):
            return 10.0 * super().cross_sum(a, b)

    with pytest.raises(NumericalInconsistencyError):
        mmd_biased(Broken(1.0), [[0.1], [0.2]], [[0.3]])


def test_unbiased_pointwise_equal_is_zero():
    x = np.random.default_rng(2).random((30, 2))
    assert mmd_unbiased_sq(GaussianKernel(0.5), x, x.copy()) == 0.0


def test_unbiased_m2_is_h():
    k = GaussianKernel(0.8)
    x, y = np.random.default_rng(3).random((2, 2, 3))
    assert mmd_unbiased_sq(k, x, y) == pytest.approx(_brute_h(k, x, y, 0, 1), rel=1e-13)


@pytest.mark.parametrize("kernel", [GaussianKernel(0.4), LaplaceKernel(0.6)])
def test_unbiased_matches_brute_force(kernel):
    g = np.random.default_rng(4)
    x, y = g.random((12, 2)), g.random((12, 2))
    brute = sum(_brute_h(kernel, x, y, i, j) for i in range(12) for j in range(12) if i != j) / (12 * 11)
    assert mmd_unbiased_sq(kernel, x, y) == pytest.approx(brute, rel=1e-11)


def test_h_symmetry():
    k = GaussianKernel(0.3)
    x, y = np.random.default_rng(5).random((2, 10, 2))
    for i in range(10):
        for j in range(10):
            assert _brute_h(k, x, y, i, j) == pytest.approx(_brute_h(k, x, y, j, i), abs=1e-15)


def test_biased_unbiased_identity():
    # m^2 Mb^2 - [terms of the U-statistic] = diagonal contributions.
    k = GaussianKernel(0.5)
    g = np.random.default_rng(6)
    m = 40
    x, y = g.random((m, 2)), g.random((m, 2))
    b2 = mmd_biased_sq(k, x, y)
    u2 = mmd_unbiased_sq(k, x, y)
    diag = sum(k.eval(x[i], x[i]) + k.eval(y[i], y[i]) - 2 * k.eval(x[i], y[i]) for i in range(m))
    assert m * m * b2 == pytest.approx(m * (m - 1) * u2 + diag, rel=1e-12)


def test_unbiased_dirac_pair_mean():
    k = GaussianKernel(0.5)
    a, b = np.array([0.2, 0.3]), np.array([0.6, 0.9])
    m = 50
    vals = [mmd_unbiased_sq(k, np.tile(a, (m, 1)), np.tile(b, (m, 1))) for _ in range(3)]
    # Dirac samples are deterministic, so every replicate equals the population value.
    assert vals[0] == pytest.approx(2 - 2 * k.eval(a, b), rel=1e-12)


def test_unbiased_identical_distribution_mean_near_zero():
    k = GaussianKernel(0.3)
    g = np.random.default_rng(7)
    vals = np.array([mmd_unbiased_sq(k, g.random((30, 2)), g.random((30, 2))) for _ in range(400)])
    assert abs(vals.mean()) <= 3 * vals.std(ddof=1) / math.sqrt(len(vals))


def test_errors():
    k = GaussianKernel(1.0)
    with pytest.raises(ConfigError):
        mmd_unbiased_sq(k, [[0.1]], [[0.2]])
    with pytest.raises(ConfigError):
        mmd_unbiased_sq(k, np.zeros((3, 2)), np.zeros((4, 2)))
    with pytest.raises(ConfigError):
        mmd_biased(k, np.zeros((3, 2)), np.zeros((3, 1)))


def test_clamped():
    assert clamped(-0.2) == 0.0 and clamped(0.3) == 0.3
