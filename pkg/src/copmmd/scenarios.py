"""Built-in experiment scenarios used by ``copmmd bench``.

synthetic61
    X1 ~ U[0,1], X2 ~ U[0,500], Y = 500 sin(4 pi X1); m = 300, sigma = 1.
synthetic62
    X1 = std(1/U^2), X2 = std(V), Y = std(sin(4 pi X1)); m = 4000, sigma = 1.
housing
    UCI Housing, predict MEDV from one feature; 300 training rows,
    sigma^2 = 1/12, m = n = 300.

Each scenario is a pure function of its seed.
"""
from __future__ import annotations

import math

import numpy as np

from . import _random
from .copula import SampleMatrix
from .dependence import dep_biased, dep_raw_mmd
from .embed import embed_profile
from .errors import ConfigError
from .io import HOUSING_TARGET, housing_regression_eval, load_housing, train_test_split
from .kernel import GaussianKernel
from .select import build_profile, max_relevance, mrmr_select

HOUSING_SIGMA = math.sqrt(1.0 / 12.0)
HOUSING_JITTER = 0.5


def standardize(v: np.ndarray) -> np.ndarray:
    return (v - v.mean()) / v.std()


def _feature_pair_bars(y, x1, x2, kernel, seed, n=None) -> dict:
    s_unif, s_shuf = _random.derive_seeds(seed, 3)[1:]
    a = SampleMatrix(np.column_stack([y, x1]), ["Y", "X1"])
    b = SampleMatrix(np.column_stack([y, x2]), ["Y", "X2"])
    return {
        "raw_mmd_Y_X1": dep_raw_mmd(a, kernel, seed=s_shuf).value,
        "raw_mmd_Y_X2": dep_raw_mmd(b, kernel, seed=s_shuf).value,
        "copula_Y_X1": dep_biased(a, kernel, seed=s_unif, n=n).value,
        "copula_Y_X2": dep_biased(b, kernel, seed=s_unif, n=n).value,
    }


def synthetic61(seed: int = 0, m: int = 300, sigma: float = 1.0, n: int | None = None) -> dict:
    g = _random.rng(_random.derive_seeds(seed, 3)[0])
    x1 = g.uniform(0.0, 1.0, m)
    x2 = g.uniform(0.0, 500.0, m)
    y = 500.0 * np.sin(4.0 * np.pi * x1)
    bars = _feature_pair_bars(y, x1, x2, GaussianKernel(sigma), seed, n)
    return {"scenario": "synthetic61", "seed": seed, "m": m, "sigma": sigma, "bars": bars}


def synthetic62(seed: int = 0, m: int = 4000, sigma: float = 1.0, n: int | None = None) -> dict:
    g = _random.rng(_random.derive_seeds(seed, 3)[0])
    u = g.random(m)
    v = g.random(m)
    x1 = standardize(1.0 / u ** 2)
    x2 = standardize(v)
    y = standardize(np.sin(4.0 * np.pi * x1))
    bars = _feature_pair_bars(y, x1, x2, GaussianKernel(sigma), seed, n)
    return {"scenario": "synthetic62", "seed": seed, "m": m, "sigma": sigma, "bars": bars}


def housing(seed: int = 0, n_train: int = 300, sigma: float = HOUSING_SIGMA,
            jitter: float | None = HOUSING_JITTER, embed: bool = True, dims: int = 2) -> dict:
    """Single-feature selection for MEDV on one seeded train/test split.

    Copula estimates break the table's ties with seeded jitter; the raw-MMD
    baseline works on the unmodified values.
    """
    X = load_housing()
    s_split, s_est = _random.derive_seeds(seed, 2)
    train, test = train_test_split(X.m, n_train, s_split)
    Xtr = X.rows(train)
    kernel = GaussianKernel(sigma)
    target = HOUSING_TARGET
    cop = build_profile(Xtr, target, "b", kernel, seed=s_est, jitter_magnitude=jitter)
    raw = build_profile(Xtr, target, "raw_mmd_b", kernel, seed=s_est, include_pairwise=False)
    errors = {j: housing_regression_eval(X, target, j, train, test) for j in cop.features}
    out = {
        "scenario": "housing",
        "seed": seed,
        "m": int(train.size),
        "sigma": sigma,
        "column_names": X.column_names,
        "copula_relevance": dict(zip(cop.features, cop.target_deps.tolist())),
        "raw_relevance": dict(zip(raw.features, raw.target_deps.tolist())),
        "copula_selected": max_relevance(cop, 1).selected[0],
        "copula_selected_mrmr": mrmr_select(cop, 1).selected[0],
        "raw_selected": max_relevance(raw, 1).selected[0],
        "regression_mse": errors,
    }
    if embed:
        full_cop = build_profile(Xtr, None, "b", kernel, seed=s_est, jitter_magnitude=jitter)
        full_raw = build_profile(Xtr, None, "raw_mmd_b", kernel, seed=s_est)
        out["embedding_copula"] = embed_profile(full_cop, dims).to_dict()
        out["embedding_raw"] = embed_profile(full_raw, dims).to_dict()
    return out


SCENARIOS = {"synthetic61": synthetic61, "synthetic62": synthetic62, "housing": housing}


def run_scenario(name: str, seed: int = 0, **kwargs) -> dict:
    try:
        fn = SCENARIOS[name]
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r}; available: {sorted(SCENARIOS)}") from None
    return fn(seed, **kwargs)

