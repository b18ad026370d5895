"""Independence tests built on the copula dependence estimators."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _random
from .copula import as_sample, empirical_copula_transform
from .dependence import (DEFAULT_SIGMA, UniformSample, dep_biased, semi_analytic_sq_from_copula,
                         shuffle_product)
from .errors import ConfigError
from .kernel import GaussianKernel, Kernel
from .mmd import mmd_unbiased_sq

MIN_PERMUTATIONS = 19


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float | None
    reject: bool
    alpha: float
    num_permutations: int
    seed: int
    statistic_kind: str
    null_statistics: tuple[float, ...] = ()
    threshold: float | None = None

    __test__ = False  # not a pytest class

    def to_dict(self, include_null: bool = False) -> dict:
        out = {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "reject": self.reject,
            "alpha": self.alpha,
            "num_permutations": self.num_permutations,
            "seed": self.seed,
            "statistic_kind": self.statistic_kind,
            "threshold": self.threshold,
        }
        if include_null:
            out["null_statistics"] = list(self.null_statistics)
        return out


def _statistic(kernel: Kernel, kind: str, uniforms):
    if kind == "semi_analytic_u_squared":
        return lambda X: semi_analytic_sq_from_copula(kernel, empirical_copula_transform(X))
    return lambda X: mmd_unbiased_sq(kernel, empirical_copula_transform(X), uniforms.points)


def independence_test_permutation(X, kernel: Kernel | None = None, num_permutations: int = 199,
                                  alpha: float = 0.05, seed: int = 0) -> TestResult:
    """Permutation test of mutual independence of the columns of ``X``.

    The statistic is the semi-analytic squared copula dependence for the
    Gaussian kernel, or the U-statistic estimate with one fixed uniform sample
    otherwise. Null replicates rerun the statistic (rank transform included)
    on column-shuffled copies of ``X``; the p-value is
    ``(1 + #{null >= observed}) / (B + 1)``.
    """
    X = as_sample(X)
    kernel = GaussianKernel(DEFAULT_SIGMA) if kernel is None else kernel
    if num_permutations < MIN_PERMUTATIONS:
        raise ConfigError(
            f"need at least {MIN_PERMUTATIONS} permutations (cannot achieve alpha=0.05), "
            f"got {num_permutations}")
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    seeds = _random.derive_seeds(seed, num_permutations + 1)
    if kernel.has_closed_form:
        kind, uniforms = "semi_analytic_u_squared", None
    else:
        kind, uniforms = "u_squared", UniformSample.draw(X.m, X.d, seeds[0])
    stat = _statistic(kernel, kind, uniforms)
    observed = stat(X)
    null = tuple(stat(shuffle_product(X, s)) for s in seeds[1:])
    exceed = sum(1 for v in null if v >= observed)
    p = (1 + exceed) / (num_permutations + 1)
    return TestResult(observed, p, p <= alpha, alpha, num_permutations, int(seed), kind, null)


def bound_threshold(m: int, n: int, d: int, K: float, L: float, delta: float = 0.05) -> float:
    """Convergence-rate expression for the biased estimator with unit constant.

    ``max{(8 d L^2 / m * log(4 d m^2))^(1/4), (2 K (m+n)/(m n) * log(4 m^2))^(1/2)}
    + (K/m)^(1/2) + (K/n)^(1/2)``

    Not calibrated: the true rate hides an unknown absolute constant, so use
    this only as conservative guidance. ``delta`` is accepted and validated
    but does not enter the expression.
    """
    for name, v in (("m", m), ("n", n), ("d", d), ("K", K), ("L", L), ("delta", delta)):
        if not v > 0:
            raise ConfigError(f"{name} must be positive, got {v}")
    lip = (8.0 * d * L * L / m * math.log(4.0 * d * m * m)) ** 0.25
    bnd = (2.0 * K * (m + n) / (m * n) * math.log(4.0 * m * m)) ** 0.5
    return max(lip, bnd) + math.sqrt(K / m) + math.sqrt(K / n)


def independence_test_bound(X, kernel: Kernel | None = None, n: int | None = None,
                            seed: int = 0, delta: float = 0.05) -> TestResult:
    """Advisory test: reject when the biased estimate exceeds :func:`bound_threshold`.

    No p-value is produced (``p_value`` is None).
    """
    X = as_sample(X)
    kernel = GaussianKernel(DEFAULT_SIGMA) if kernel is None else kernel
    est = dep_biased(X, kernel, seed=seed, n=n)
    thr = bound_threshold(X.m, est.n, X.d, kernel.bound, kernel.lipschitz_constant(), delta)
    return TestResult(est.value, None, est.value > thr, delta, 0, int(seed), "b",
                      threshold=thr)
