"""Embedding features with dependence as proximity, via classical (Torgerson) MDS."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .select import DependenceProfile

# Eigenvalues at or below this fraction of the largest |eigenvalue| count as zero.
EIG_RTOL = 1e-12


@dataclass(frozen=True)
class EmbeddingResult:
    coordinates: np.ndarray
    eigenvalues: np.ndarray
    stress: float
    spectrum: np.ndarray
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "coordinates": self.coordinates.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "stress": self.stress,
            "spectrum": self.spectrum.tolist(),
            "truncated": self.truncated,
        }


def dependence_distances(profile: DependenceProfile | np.ndarray) -> np.ndarray:
    """exp(-dependence) off the diagonal, 0 on it.

    Accepts a profile or a bare symmetric dependence matrix.
    """
    dep = profile.pairwise if isinstance(profile, DependenceProfile) else np.asarray(profile, float)
    if dep is None:
        raise ConfigError("profile has no pairwise dependence matrix")
    if dep.ndim != 2 or dep.shape[0] != dep.shape[1]:
        raise ConfigError(f"dependence matrix must be square, got shape {dep.shape}")
    D = np.exp(-dep)
    np.fill_diagonal(D, 0.0)
    return D


def classical_mds(D, k: int = 2) -> EmbeddingResult:
    """Classical multidimensional scaling.

    Double-centres the squared dissimilarities, keeps the top-``k`` positive
    eigenpairs, and flips each axis so its largest-magnitude entry is
    positive. When fewer than ``k`` positive eigenvalues exist, fewer
    dimensions are returned and ``truncated`` is set.

    ``stress`` is the share of positive eigenvalue mass left out.
    """
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ConfigError(f"dissimilarity matrix must be square, got shape {D.shape}")
    p = D.shape[0]
    if not (1 <= k <= p - 1):
        raise ConfigError(f"k must be in [1, {p - 1}], got {k}")
    J = np.eye(p) - np.full((p, p), 1.0 / p)
    B = -0.5 * J @ (D * D) @ J
    B = 0.5 * (B + B.T)
    evals, evecs = np.linalg.eigh(B)
    order = np.argsort(evals, kind="stable")[::-1]
    evals, evecs = evals[order], evecs[:, order]
    tol = EIG_RTOL * max(1.0, float(np.max(np.abs(evals))))
    positive = evals > tol
    n_pos = int(np.count_nonzero(positive))
    kk = min(k, n_pos)
    vecs = evecs[:, :kk].copy()
    for c in range(kk):
        if vecs[np.argmax(np.abs(vecs[:, c])), c] < 0:
            vecs[:, c] = -vecs[:, c]
    coords = vecs * np.sqrt(evals[:kk])
    coords -= coords.mean(axis=0)
    pos_mass = float(np.sum(evals[positive]))
    stress = 0.0 if pos_mass == 0.0 else float(np.sum(evals[kk:n_pos])) / pos_mass
    return EmbeddingResult(coords, evals[:kk].copy(), stress, evals, truncated=kk < k)


def embed_profile(profile: DependenceProfile, k: int = 2) -> EmbeddingResult:
    return classical_mds(dependence_distances(profile), k)
