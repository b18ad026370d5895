"""Two-sample MMD estimators: the biased V-statistic and the unbiased U-statistic."""
from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError, NumericalInconsistencyError
from .kernel import Kernel

NEG_TOLERANCE = 1e-12


def _points(a, name):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] < 1:
        raise ConfigError(f"{name} must be a non-empty (count, d) array, got shape {a.shape}")
    return a


def mmd_biased_sq(kernel: Kernel, xs, ys) -> float:
    """Radicand of the biased estimator, without clamping."""
    xs, ys = _points(xs, "xs"), _points(ys, "ys")
    if xs.shape[1] != ys.shape[1]:
        raise ConfigError(f"dimension mismatch: {xs.shape[1]} vs {ys.shape[1]}")
    m, n = xs.shape[0], ys.shape[0]
    kxx = kernel.offdiag_sum(xs) + kernel.paired_sum(xs, xs)
    kyy = kernel.offdiag_sum(ys) + kernel.paired_sum(ys, ys)
    kxy = kernel.cross_sum(xs, ys)
    return kxx / (m * m) + kyy / (n * n) - 2.0 * kxy / (m * n)


def mmd_biased(kernel: Kernel, xs, ys) -> float:
    """Biased MMD estimate between point sets ``xs`` (m, d) and ``ys`` (n, d).

    Tiny negative radicands from rounding (above ``-1e-12``) are clamped to 0;
    anything more negative means the kernel is not positive definite.
    """
    r = mmd_biased_sq(kernel, xs, ys)
    if r < 0.0:
        if r < -NEG_TOLERANCE:
            raise NumericalInconsistencyError(f"negative MMD radicand {r!r}")
        r = 0.0
    return math.sqrt(r)


def mmd_unbiased_sq(kernel: Kernel, xs, ys) -> float:
    """Unbiased U-statistic estimate of MMD^2 on the paired sample (xs_i, ys_i).

    Averages ``h(L_i, L_j) = k(x_i,x_j) + k(y_i,y_j) - k(x_i,y_j) - k(x_j,y_i)``
    over ordered pairs ``i != j``. Can be negative.
    """
    xs, ys = _points(xs, "xs"), _points(ys, "ys")
    if xs.shape != ys.shape:
        raise ConfigError(f"paired sample needs equal shapes, got {xs.shape} and {ys.shape}")
    m = xs.shape[0]
    if m < 2:
        raise ConfigError("unbiased estimator needs at least 2 pairs")
    kxx = kernel.offdiag_sum(xs)
    kyy = kernel.offdiag_sum(ys)
    kxy = kernel.cross_sum(xs, ys) - kernel.paired_sum(xs, ys)
    return (kxx + kyy - 2.0 * kxy) / (m * (m - 1))


def clamped(value: float) -> float:
    """max(0, value), for callers that need a distance-like quantity."""
    return max(0.0, value)
