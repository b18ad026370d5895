"""Copula dependence estimators and the raw-MMD baseline.

The dependence of a sample is the MMD between its empirical copula and the
uniform distribution on the unit cube. Three estimators are offered:

``u_squared``
    U-statistic pairing copula row i with uniform draw i.
``b``
    biased (square-root) estimator against n uniform draws.
``semi_analytic_u_squared``
    closed-form uniform expectations (Gaussian kernel only), no sampling.

``raw_mmd_b`` measures the biased MMD between the raw sample and a copy
with every column independently permuted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _random
from .copula import SampleMatrix, as_sample, empirical_copula_transform
from .errors import ConfigError
from .kernel import DEFAULT_SIGMA, GaussianKernel, Kernel, require_closed_form
from .mmd import mmd_biased, mmd_unbiased_sq

ESTIMATORS = ("u_squared", "b", "semi_analytic_u_squared", "raw_mmd_b")


@dataclass(frozen=True)
class UniformSample:
    points: np.ndarray
    seed: int
    generator: str = _random.GENERATOR

    @classmethod
    def draw(cls, n: int, d: int, seed: int) -> "UniformSample":
        if n < 1 or d < 1:
            raise ConfigError(f"uniform sample needs n >= 1 and d >= 1, got n={n}, d={d}")
        return cls(_random.rng(seed).random((n, d)), int(seed))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class DependenceEstimate:
    value: float
    estimator: str
    m: int
    n: int
    kernel: Kernel
    seed: int | None
    generator: str = _random.GENERATOR
    warnings: tuple[str, ...] = field(default=())

    def __float__(self):
        return self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "estimator": self.estimator,
            "m": self.m,
            "n": self.n,
            "kernel": self.kernel.describe(),
            "seed": self.seed,
            "generator": self.generator,
            "warnings": list(self.warnings),
        }


def _default_kernel(kernel):
    return GaussianKernel(DEFAULT_SIGMA) if kernel is None else kernel


def _uniforms_for(uniforms, n, d, seed):
    if uniforms is None:
        return UniformSample.draw(n, d, seed)
    if not isinstance(uniforms, UniformSample):
        pts = np.asarray(uniforms, dtype=np.float64)
        uniforms = UniformSample(pts, -1 if seed is None else int(seed), "user-supplied")
    if uniforms.d != d:
        raise ConfigError(f"uniform sample has dimension {uniforms.d}, data has {d}")
    return uniforms


def _copula(X, jitter_magnitude, seed):
    # Jitter noise uses a child stream so it never overlaps the uniform draws.
    jseed = _random.derive_seeds(seed, 1)[0] if jitter_magnitude is not None else 0
    return empirical_copula_transform(X, jitter_magnitude, jseed)


def _warnings(X: SampleMatrix) -> tuple[str, ...]:
    if X.d == 1:
        return ("d=1: the copula of a single variable is uniform, dependence is degenerate",)
    return ()


def dep_unbiased_sq(X, kernel: Kernel | None = None, uniforms=None, seed: int = 0,
                    jitter_magnitude: float | None = None) -> DependenceEstimate:
    """U-statistic estimate of the squared copula dependence.

    ``uniforms`` must hold exactly m points; when omitted they are drawn from
    ``seed``. Row i of the empirical copula is paired with uniform point i.
    """
    X = as_sample(X)
    kernel = _default_kernel(kernel)
    u = _uniforms_for(uniforms, X.m, X.d, seed)
    if u.n != X.m:
        raise ConfigError(f"unbiased estimator needs n == m, got n={u.n}, m={X.m}")
    z = _copula(X, jitter_magnitude, seed)
    value = mmd_unbiased_sq(kernel, z, u.points)
    return DependenceEstimate(value, "u_squared", X.m, u.n, kernel, u.seed, u.generator, _warnings(X))


def dep_biased(X, kernel: Kernel | None = None, uniforms=None, seed: int = 0,
               n: int | None = None, jitter_magnitude: float | None = None) -> DependenceEstimate:
    """Biased estimate of the copula dependence against ``n`` uniform points (default n = m)."""
    X = as_sample(X)
    kernel = _default_kernel(kernel)
    u = _uniforms_for(uniforms, X.m if n is None else n, X.d, seed)
    z = _copula(X, jitter_magnitude, seed)
    value = mmd_biased(kernel, z, u.points)
    return DependenceEstimate(value, "b", X.m, u.n, kernel, u.seed, u.generator, _warnings(X))


def semi_analytic_sq_from_copula(kernel: Kernel, z: np.ndarray) -> float:
    require_closed_form(kernel)
    m, d = z.shape
    if m < 2:
        raise ConfigError("semi-analytic estimator needs m >= 2")
    pair_term = kernel.offdiag_sum(z) / (m * (m - 1))
    cross_term = 2.0 * math.fsum(np.atleast_1d(kernel.uniform_cross_expectation(z))) / m
    return pair_term - cross_term + kernel.uniform_self_expectation(d)


def dep_semi_analytic_sq(X, kernel: Kernel | None = None, jitter_magnitude: float | None = None,
                         seed: int = 0) -> DependenceEstimate:
    """Squared copula dependence with the uniform expectations in closed form.

    Deterministic: no uniform sample is drawn, so ``n`` is recorded as 0.
    ``seed`` only matters when ``jitter_magnitude`` is set.
    """
    X = as_sample(X)
    kernel = _default_kernel(kernel)
    require_closed_form(kernel)
    z = _copula(X, jitter_magnitude, seed)
    value = semi_analytic_sq_from_copula(kernel, z)
    return DependenceEstimate(value, "semi_analytic_u_squared", X.m, 0, kernel,
                              seed if jitter_magnitude is not None else None,
                              warnings=_warnings(X))


def shuffle_product(X, seed: int) -> SampleMatrix:
    """Permute every column independently, destroying dependence but keeping marginals."""
    X = as_sample(X)
    g = _random.rng(seed)
    out = np.empty_like(X.values)
    for j in range(X.d):
        out[:, j] = X.values[g.permutation(X.m), j]
    return SampleMatrix(out, X.column_names)


def dep_raw_mmd(X, kernel: Kernel | None = None, seed: int = 0) -> DependenceEstimate:
    """Biased MMD between the raw sample and its column-shuffled copy (no copula transform)."""
    X = as_sample(X)
    kernel = _default_kernel(kernel)
    value = mmd_biased(kernel, X.values, shuffle_product(X, seed).values)
    return DependenceEstimate(value, "raw_mmd_b", X.m, X.m, kernel, int(seed), warnings=_warnings(X))


def estimate(X, estimator: str = "b", kernel: Kernel | None = None, seed: int = 0,
             n: int | None = None, jitter_magnitude: float | None = None) -> DependenceEstimate:
    """Dispatch to one of :data:`ESTIMATORS` by name."""
    if estimator == "u_squared":
        if n is not None and n != as_sample(X).m:
            raise ConfigError("u_squared needs n == m")
        return dep_unbiased_sq(X, kernel, seed=seed, jitter_magnitude=jitter_magnitude)
    if estimator == "b":
        return dep_biased(X, kernel, seed=seed, n=n, jitter_magnitude=jitter_magnitude)
    if estimator == "semi_analytic_u_squared":
        return dep_semi_analytic_sq(X, kernel, jitter_magnitude=jitter_magnitude, seed=seed)
    if estimator == "raw_mmd_b":
        return dep_raw_mmd(X, kernel, seed=seed)
    raise ConfigError(f"unknown estimator {estimator!r}; available: {list(ESTIMATORS)}")
