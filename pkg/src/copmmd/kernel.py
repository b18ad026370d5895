"""Bounded Lipschitz kernels on the unit cube and their uniform expectations."""
from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np
from scipy.special import erf

from . import _kernels
from .errors import ConfigError, SemiAnalyticUnsupportedError

DEFAULT_SIGMA = math.sqrt(1.0 / 12.0)

# Sample size and seed for the Monte-Carlo fallback of non-Gaussian kernels.
MC_FALLBACK_SIZE = 20_000
MC_FALLBACK_SEED = 20120626


def _as_points(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 0:
        z = z.reshape(1)
    return z


class Kernel(ABC):
    """A bounded kernel ``k`` with ``0 <= k <= bound`` and Lipschitz constant ``lipschitz``.

    Subclasses provide ``eval`` and a vectorised ``_block``. The batch sums
    used by the estimators default to chunked numpy over ``_block``.
    """

    family: str = "abstract"

    def __init__(self, sigma: float = DEFAULT_SIGMA):
        sigma = float(sigma)
        if not (sigma > 0.0 and math.isfinite(sigma)):
            raise ConfigError(f"kernel bandwidth must be positive and finite, got {sigma}")
        self.sigma = sigma

    def __repr__(self):
        return f"{type(self).__name__}(sigma={self.sigma!r})"

    def __eq__(self, other):
        return type(self) is type(other) and self.sigma == other.sigma

    def __hash__(self):
        return hash((type(self).__name__, self.sigma))

    @property
    def bound(self) -> float:
        return 1.0

    @abstractmethod
    def eval(self, z1, z2) -> float: ...

    @abstractmethod
    def lipschitz_constant(self) -> float: ...

    @abstractmethod
    def _block(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Kernel matrix between the rows of ``a`` and ``b``."""

    def describe(self) -> dict:
        return {
            "family": self.family,
            "sigma": self.sigma,
            "bound": self.bound,
            "lipschitz": self.lipschitz_constant(),
        }

    # Batch sums --------------------------------------------------------

    def cross_sum(self, a, b) -> float:
        a, b = np.atleast_2d(a), np.atleast_2d(b)
        _check_dims(a, b)
        step = max(1, _kernels._BLOCK_ENTRIES // max(1, b.shape[0] * a.shape[1]))
        rows = [self._block(a[s:s + step], b).sum(axis=1) for s in range(0, a.shape[0], step)]
        return math.fsum(np.concatenate(rows))

    def offdiag_sum(self, a) -> float:
        a = np.atleast_2d(a)
        total = self.cross_sum(a, a)
        return total - self.paired_sum(a, a)

    def paired_sum(self, a, b) -> float:
        a, b = np.atleast_2d(a), np.atleast_2d(b)
        _check_dims(a, b)
        return math.fsum(self._block_diag(a, b))

    def _block_diag(self, a, b):
        return np.array([self.eval(x, y) for x, y in zip(a, b)])

    # Uniform expectations ------------------------------------------------

    def uniform_cross_expectation(self, z) -> np.ndarray | float:
        """E_U k(z, U) with U ~ U[0,1]^d, estimated by seeded Monte-Carlo."""
        z = np.atleast_2d(np.asarray(z, dtype=np.float64))
        u = np.random.default_rng(MC_FALLBACK_SEED).random((MC_FALLBACK_SIZE, z.shape[1]))
        vals = self._block(z, u).mean(axis=1)
        return vals if vals.size > 1 else float(vals[0])

    def uniform_self_expectation(self, d: int) -> float:
        """E k(U, U') for independent U, U' ~ U[0,1]^d, estimated by seeded Monte-Carlo."""
        d = _check_d(d)
        rng = np.random.default_rng(MC_FALLBACK_SEED)
        u = rng.random((MC_FALLBACK_SIZE, d))
        v = rng.random((MC_FALLBACK_SIZE, d))
        return float(np.mean(self._block_diag(u, v)))

    @property
    def has_closed_form(self) -> bool:
        return False


class GaussianKernel(Kernel):
    """k(z1, z2) = exp(-|z1 - z2|^2 / (2 sigma^2))."""

    family = "gaussian"

    @property
    def gamma(self) -> float:
        return 1.0 / (2.0 * self.sigma * self.sigma)

    @property
    def has_closed_form(self) -> bool:
        return True

    def eval(self, z1, z2) -> float:
        z1, z2 = _as_points(z1), _as_points(z2)
        if z1.shape != z2.shape:
            raise ConfigError(f"dimension mismatch: {z1.shape} vs {z2.shape}")
        diff = z1 - z2
        r = 0.0
        for t in diff:
            r += t * t
        return math.exp(-self.gamma * r)

    def lipschitz_constant(self) -> float:
        # max over t >= 0 of (t / sigma^2) exp(-t^2 / (2 sigma^2)), attained at t = sigma
        return math.exp(-0.5) / self.sigma

    def _block(self, a, b):
        diff = a[:, None, :] - b[None, :, :]
        return np.exp(-self.gamma * np.einsum("ijk,ijk->ij", diff, diff))

    def cross_sum(self, a, b) -> float:
        a, b = np.atleast_2d(a), np.atleast_2d(b)
        _check_dims(a, b)
        return _kernels.gauss_cross_sum(a, b, self.gamma)

    def offdiag_sum(self, a) -> float:
        return _kernels.gauss_offdiag_sum(np.atleast_2d(a), self.gamma)

    def paired_sum(self, a, b) -> float:
        a, b = np.atleast_2d(a), np.atleast_2d(b)
        _check_dims(a, b)
        return _kernels.gauss_paired_sum(a, b, self.gamma)

    def uniform_cross_expectation(self, z):
        """Closed form of E_U k(z, U), U ~ U[0,1]^d.

        Accepts a single point (returns a float) or an ``(m, d)`` array of
        points (returns an array of length m). Each coordinate contributes
        ``sigma*sqrt(pi/2) * (erf((1-z)/(sigma*sqrt2)) + erf(z/(sigma*sqrt2)))``.
        """
        z = np.asarray(z, dtype=np.float64)
        single = z.ndim <= 1
        z = np.atleast_2d(z)
        s2 = self.sigma * math.sqrt(2.0)
        per_coord = self.sigma * math.sqrt(math.pi / 2.0) * (erf((1.0 - z) / s2) + erf(z / s2))
        vals = np.prod(per_coord, axis=1)
        return float(vals[0]) if single else vals

    def uniform_self_expectation(self, d: int) -> float:
        d = _check_d(d)
        s = self.sigma
        one_dim = (s * math.sqrt(2.0 * math.pi) * math.erf(1.0 / (s * math.sqrt(2.0)))
                   + 2.0 * s * s * math.expm1(-1.0 / (2.0 * s * s)))
        return one_dim ** d


class LaplaceKernel(Kernel):
    """k(z1, z2) = exp(-|z1 - z2| / sigma).

    No closed-form uniform expectations are provided; they fall back to
    seeded Monte-Carlo and the semi-analytic estimator refuses this kernel.
    """

    family = "laplace"

    def eval(self, z1, z2) -> float:
        z1, z2 = _as_points(z1), _as_points(z2)
        if z1.shape != z2.shape:
            raise ConfigError(f"dimension mismatch: {z1.shape} vs {z2.shape}")
        return math.exp(-float(np.linalg.norm(z1 - z2)) / self.sigma)

    def lipschitz_constant(self) -> float:
        return 1.0 / self.sigma

    def _block(self, a, b):
        diff = a[:, None, :] - b[None, :, :]
        return np.exp(-np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)) / self.sigma)

    def _block_diag(self, a, b):
        return np.exp(-np.linalg.norm(a - b, axis=1) / self.sigma)


KERNELS = {"gaussian": GaussianKernel, "laplace": LaplaceKernel}


def make_kernel(family: str = "gaussian", sigma: float = DEFAULT_SIGMA) -> Kernel:
    try:
        cls = KERNELS[family]
    except KeyError:
        raise ConfigError(f"unknown kernel family {family!r}; available: {sorted(KERNELS)}") from None
    return cls(sigma)


def require_closed_form(kernel: Kernel) -> None:
    if not kernel.has_closed_form:
        raise SemiAnalyticUnsupportedError(
            f"semi-analytic estimator unsupported for kernel family {kernel.family!r}")


def _check_dims(a, b):
    if a.shape[1] != b.shape[1]:
        raise ConfigError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")


def _check_d(d) -> int:
    if int(d) != d or d < 1:
        raise ConfigError(f"dimension must be a positive integer, got {d}")
    return int(d)
