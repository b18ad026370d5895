"""Empirical copula transform via coordinatewise rank statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DataError


@dataclass(frozen=True)
class SampleMatrix:
    """m observations (rows) of d real features (columns)."""

    values: np.ndarray
    column_names: list[str] | None = field(default=None)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise DataError(f"sample must be a 2-d array, got shape {v.shape}")
        if v.shape[1] < 1:
            raise DataError("sample needs at least one column")
        if v.shape[0] < 2:
            raise DataError(f"sample needs at least 2 rows, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            bad = np.argwhere(~np.isfinite(v))[0]
            raise DataError(f"non-finite value at row {bad[0]}, column {bad[1]}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        names = self.column_names
        if names is None:
            names = [f"x{j + 1}" for j in range(v.shape[1])]
        elif len(names) != v.shape[1]:
            raise DataError(f"{len(names)} column names for {v.shape[1]} columns")
        object.__setattr__(self, "column_names", list(names))

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def columns(self, idx: Sequence[int]) -> "SampleMatrix":
        idx = list(idx)
        return SampleMatrix(self.values[:, idx], [self.column_names[j] for j in idx])

    def rows(self, idx) -> "SampleMatrix":
        return SampleMatrix(self.values[np.asarray(idx)], self.column_names)


def as_sample(X) -> SampleMatrix:
    return X if isinstance(X, SampleMatrix) else SampleMatrix(X)


def rank(x: float, column) -> int:
    """Number of elements of ``column`` that are <= ``x``."""
    column = np.asarray(column, dtype=np.float64)
    if column.size == 0:
        raise DataError("rank of a value in an empty column is undefined")
    return int(np.count_nonzero(column <= x))


def _column_ranks(col: np.ndarray) -> np.ndarray:
    # searchsorted(side="right") on the sorted column counts elements <= each value,
    # so tied values share the largest rank of their group.
    srt = np.sort(col, kind="stable")
    return np.searchsorted(srt, col, side="right")


def jitter(X, magnitude: float = 0.5, seed: int = 0) -> SampleMatrix:
    """Break ties with seeded uniform noise.

    Each column gets noise drawn from ``U[0, magnitude * gap)`` where ``gap`` is
    the smallest positive difference between distinct values of that column,
    so the order of distinct values is kept for ``magnitude <= 1``. Columns
    without ties are returned unchanged.
    """
    X = as_sample(X)
    if not (0.0 < magnitude <= 1.0):
        raise ConfigError(f"jitter magnitude must be in (0, 1], got {magnitude}")
    rng = np.random.default_rng(seed)
    out = X.values.copy()
    for j in range(X.d):
        # One draw per column regardless of ties keeps streams aligned across columns.
        noise = rng.random(X.m)
        uniq = np.unique(out[:, j])
        if uniq.size == X.m:
            continue
        gap = float(np.min(np.diff(uniq))) if uniq.size > 1 else 1.0
        out[:, j] = out[:, j] + magnitude * gap * noise
    return SampleMatrix(out, X.column_names)


def empirical_copula_transform(X, jitter_magnitude: float | None = None, seed: int = 0) -> np.ndarray:
    """Map each entry to its within-column rank divided by m.

    Parameters
    ----------
    X : SampleMatrix or array_like, shape (m, d)
    jitter_magnitude : float, optional
        If given, ties are first broken with :func:`jitter` at this relative
        magnitude. Off by default; ties then share the maximal rank.
    seed : int
        Seed for the jitter noise.

    Returns
    -------
    ndarray, shape (m, d)
        Entries in {1/m, ..., m/m}.
    """
    X = as_sample(X)
    if jitter_magnitude is not None:
        X = jitter(X, jitter_magnitude, seed)
    m = X.m
    ranks = np.empty(X.values.shape, dtype=np.int64)
    for j in range(X.d):
        ranks[:, j] = _column_ranks(X.values[:, j])
    return ranks / m


def has_ties(X) -> bool:
    X = as_sample(X)
    return any(np.unique(X.values[:, j]).size < X.m for j in range(X.d))


def dkw_epsilon(m: int, d: int, delta: float) -> float:
    """Deviation level at which the multivariate DKW-type tail bound equals ``delta``.

    Inverts ``2 d exp(-2 m eps^2 / d) = delta``.
    """
    if m < 1 or d < 1:
        raise ConfigError(f"m and d must be positive, got m={m}, d={d}")
    if not (0.0 < delta < 1.0):
        raise ConfigError(f"delta must be in (0, 1), got {delta}")
    return math.sqrt(d / (2.0 * m) * math.log(2.0 * d / delta))


def dkw_tail_bound(m: int, d: int, eps: float) -> float:
    """Upper bound on P(sup_x |F(x) - F_hat(x)|_2 > eps)."""
    return 2.0 * d * math.exp(-2.0 * m * eps * eps / d)


def sup_deviation(X, marginal_cdfs: Sequence[Callable[[np.ndarray], np.ndarray]]) -> float:
    """sup over x in R^d of |F(x) - F_hat(x)|_2 for known marginal cdfs.

    The supremum splits over coordinates, so it equals the Euclidean norm of
    the per-column Kolmogorov-Smirnov distances.
    """
    X = as_sample(X)
    if len(marginal_cdfs) != X.d:
        raise ConfigError("need one marginal cdf per column")
    m = X.m
    ks = np.empty(X.d)
    steps = np.arange(1, m + 1) / m
    for j, cdf in enumerate(marginal_cdfs):
        f = np.asarray(cdf(np.sort(X.values[:, j])), dtype=np.float64)
        ks[j] = max(np.max(steps - f), np.max(f - (steps - 1.0 / m)))
    return float(np.sqrt(np.sum(ks * ks)))
