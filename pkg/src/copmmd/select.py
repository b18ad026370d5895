"""Dependence-based feature selection: max-relevance and relevance-minus-redundancy."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _random
from .copula import as_sample, jitter
from .dependence import estimate
from .errors import ConfigError
from .kernel import DEFAULT_SIGMA, GaussianKernel, Kernel

OBJECTIVES = ("max_relevance", "mrmr")


@dataclass(frozen=True)
class DependenceProfile:
    """Pairwise dependence estimates among features and against a target.

    ``features`` are column indices of the source sample; ``target_deps[a]``
    and ``pairwise[a, b]`` are indexed by position in ``features``.
    """

    features: tuple[int, ...]
    target: int | None
    target_deps: np.ndarray | None
    pairwise: np.ndarray | None
    estimator: str
    kernel: Kernel
    seed: int
    column_names: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "features": list(self.features),
            "target": self.target,
            "target_deps": None if self.target_deps is None else self.target_deps.tolist(),
            "pairwise": None if self.pairwise is None else self.pairwise.tolist(),
            "estimator": self.estimator,
            "kernel": self.kernel.describe(),
            "seed": self.seed,
            "column_names": list(self.column_names),
        }


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]
    scores: tuple[float, ...]
    objective: str
    h: int

    def to_dict(self) -> dict:
        return {"selected": list(self.selected), "scores": list(self.scores),
                "objective": self.objective, "h": self.h}


def build_profile(X, target: int | None = None, estimator: str = "b", kernel: Kernel | None = None,
                  seed: int = 0, n: int | None = None, jitter_magnitude: float | None = None,
                  include_pairwise: bool = True) -> DependenceProfile:
    """Estimate all 2-d dependencies needed for selection or embedding.

    With ``target=None`` every column is a feature and only the pairwise
    matrix is filled. The same ``seed`` (hence the same uniform sample or
    shuffle) is used for every pair, so differences between entries come from
    the data alone. Ties are broken once for the whole sample when
    ``jitter_magnitude`` is set.
    """
    X = as_sample(X)
    kernel = GaussianKernel(DEFAULT_SIGMA) if kernel is None else kernel
    if X.d < 2:
        raise ConfigError("feature selection needs at least 2 columns")
    if target is not None and not (0 <= target < X.d):
        raise ConfigError(f"target index {target} out of range for {X.d} columns")
    if jitter_magnitude is not None and estimator != "raw_mmd_b":
        X = jitter(X, jitter_magnitude, _random.derive_seeds(seed, 2)[1])
    features = tuple(j for j in range(X.d) if j != target)

    def dep(i, j):
        return estimate(X.columns([i, j]), estimator, kernel, seed=seed, n=n).value

    target_deps = None
    if target is not None:
        target_deps = np.array([dep(target, j) for j in features])
    pairwise = None
    if include_pairwise:
        k = len(features)
        pairwise = np.empty((k, k))
        for a in range(k):
            for b in range(a, k):
                pairwise[a, b] = pairwise[b, a] = dep(features[a], features[b])
    return DependenceProfile(features, target, target_deps, pairwise, estimator, kernel, int(seed),
                             tuple(X.column_names))


def _check_h(profile: DependenceProfile, h: int):
    if profile.target_deps is None:
        raise ConfigError("profile has no target dependencies")
    if not (1 <= h <= len(profile.features)):
        raise ConfigError(f"h must be in [1, {len(profile.features)}], got {h}")


# Objectives are set functions: exact summation makes them independent of index order.


def relevance_objective(profile: DependenceProfile, subset) -> float:
    subset = list(subset)
    return math.fsum(profile.target_deps[subset]) / len(subset)


def mrmr_objective(profile: DependenceProfile, subset) -> float:
    subset = list(subset)
    s = len(subset)
    rel = math.fsum(profile.target_deps[subset]) / s
    red = math.fsum(profile.pairwise[np.ix_(subset, subset)].ravel()) / (s * s)
    return rel - red


def max_relevance(profile: DependenceProfile, h: int) -> SelectionResult:
    """Top-h features by target dependence; ties go to the lower index.

    The mean-of-relevances objective is maximized exactly by the top h.
    """
    _check_h(profile, h)
    order = np.argsort(-profile.target_deps, kind="stable")[:h]
    scores = tuple(relevance_objective(profile, order[:t + 1]) for t in range(h))
    return SelectionResult(tuple(profile.features[a] for a in order), scores, "max_relevance", h)


def mrmr_select(profile: DependenceProfile, h: int) -> SelectionResult:
    """Greedy forward selection on relevance minus redundancy.

    Each step adds the feature that maximizes the objective of the enlarged
    set, diagonal redundancy terms included. Ties go to the lower index.
    """
    _check_h(profile, h)
    if profile.pairwise is None:
        raise ConfigError("mrmr needs the pairwise dependence matrix")
    chosen: list[int] = []
    scores = []
    remaining = list(range(len(profile.features)))
    for _ in range(h):
        best, best_val = None, -np.inf
        for a in remaining:
            val = mrmr_objective(profile, chosen + [a])
            if val > best_val:
                best, best_val = a, val
        chosen.append(best)
        remaining.remove(best)
        scores.append(best_val)
    return SelectionResult(tuple(profile.features[a] for a in chosen), tuple(scores), "mrmr", h)


def exhaustive_select(profile: DependenceProfile, h: int, objective: str = "mrmr") -> SelectionResult:
    """Best size-h subset by brute force. Exponential in the number of features."""
    _check_h(profile, h)
    fn = {"mrmr": mrmr_objective, "max_relevance": relevance_objective}[objective]
    best, best_val = None, -np.inf
    for combo in itertools.combinations(range(len(profile.features)), h):
        val = fn(profile, combo)
        if val > best_val:
            best, best_val = combo, val
    return SelectionResult(tuple(profile.features[a] for a in best), (best_val,), objective, h)


def select(profile: DependenceProfile, h: int, objective: str = "mrmr") -> SelectionResult:
    if objective == "mrmr":
        return mrmr_select(profile, h)
    if objective == "max_relevance":
        return max_relevance(profile, h)
    raise ConfigError(f"unknown objective {objective!r}; available: {list(OBJECTIVES)}")
