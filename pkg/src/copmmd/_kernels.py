"""Hot Gaussian Gram-sum kernels.

Two interchangeable implementations live here: numba ``@njit`` loops and a
chunked pure-numpy path. The active one is picked at import time from the
``COPMMD_BACKEND`` environment variable (``numba`` or ``numpy``). When the
variable is unset, numba is used if it can be imported.

Every routine returns per-row partial sums; the final reduction is done with
``math.fsum`` so the result does not depend on how rows were scheduled across
threads. The two backends are not bitwise identical to each other (libm
``exp`` vs numpy ``exp``, different accumulation order), only to themselves.
"""
from __future__ import annotations

import math
import os
import warnings

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
    # Old system TBB is harmless here: numba falls back to another threading layer.
    warnings.filterwarnings("ignore", message="The TBB threading layer requires",
                            category=numba.NumbaWarning)
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

# Upper bound on the number of float64 entries in one temporary block.
_BLOCK_ENTRIES = 1 << 21


def _resolve_backend() -> str:
    requested = os.environ.get("COPMMD_BACKEND", "").strip().lower()
    if requested in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if requested not in ("numba", "numpy"):
        raise ValueError(f"COPMMD_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAVE_NUMBA:
        raise ImportError("COPMMD_BACKEND=numba but numba is not installed")
    return requested


# ---------------------------------------------------------------------------
# numpy path


def _np_cross_row_sums(a, b, gamma):
    m, d = a.shape
    n = b.shape[0]
    out = np.empty(m)
    step = max(1, _BLOCK_ENTRIES // max(1, n * d))
    for start in range(0, m, step):
        blk = a[start:start + step]
        diff = blk[:, None, :] - b[None, :, :]
        sq = np.einsum("ijk,ijk->ij", diff, diff)
        out[start:start + step] = np.exp(-gamma * sq).sum(axis=1)
    return out


def _np_upper_row_sums(a, gamma):
    # Row i holds sum_{j > i} k(a_i, a_j).
    m, d = a.shape
    out = np.zeros(m)
    step = max(1, _BLOCK_ENTRIES // max(1, m * d))
    for start in range(0, m, step):
        stop = min(m, start + step)
        blk = a[start:stop]
        tail = a[start + 1:]
        diff = blk[:, None, :] - tail[None, :, :]
        sq = np.einsum("ijk,ijk->ij", diff, diff)
        vals = np.exp(-gamma * sq)
        # Mask j <= i: column c of ``tail`` is index start + 1 + c.
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(start + 1, m)[None, :]
        vals[cols <= rows] = 0.0
        out[start:stop] = vals.sum(axis=1)
    return out


def _np_paired(a, b, gamma):
    diff = a - b
    return np.exp(-gamma * np.einsum("ij,ij->i", diff, diff))


# ---------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @njit(cache=True, parallel=True, nogil=True)
    def _nb_cross_row_sums(a, b, gamma):
        m, d = a.shape
        n = b.shape[0]
        out = np.empty(m)
        for i in prange(m):
            s = 0.0
            for j in range(n):
                r = 0.0
                for k in range(d):
                    t = a[i, k] - b[j, k]
                    r += t * t
                s += math.exp(-gamma * r)
            out[i] = s
        return out

    @njit(cache=True, parallel=True, nogil=True)
    def _nb_upper_row_sums(a, gamma):
        m, d = a.shape
        out = np.zeros(m)
        for i in prange(m):
            s = 0.0
            for j in range(i + 1, m):
                r = 0.0
                for k in range(d):
                    t = a[i, k] - a[j, k]
                    r += t * t
                s += math.exp(-gamma * r)
            out[i] = s
        return out

    @njit(cache=True, nogil=True)
    def _nb_paired(a, b, gamma):
        m, d = a.shape
        out = np.empty(m)
        for i in range(m):
            r = 0.0
            for k in range(d):
                t = a[i, k] - b[i, k]
                r += t * t
            out[i] = math.exp(-gamma * r)
        return out

    NUMBA_IMPL = {
        "cross_row_sums": _nb_cross_row_sums,
        "upper_row_sums": _nb_upper_row_sums,
        "paired": _nb_paired,
    }
else:  # pragma: no cover
    NUMBA_IMPL = None

NUMPY_IMPL = {
    "cross_row_sums": _np_cross_row_sums,
    "upper_row_sums": _np_upper_row_sums,
    "paired": _np_paired,
}

BACKEND = _resolve_backend()
_IMPL = NUMBA_IMPL if BACKEND == "numba" else NUMPY_IMPL


def _prep(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def gauss_cross_sum(a, b, gamma, impl=None):
    """Sum of exp(-gamma * |a_i - b_j|^2) over all (i, j)."""
    impl = impl or _IMPL
    return math.fsum(impl["cross_row_sums"](_prep(a), _prep(b), float(gamma)))


def gauss_offdiag_sum(a, gamma, impl=None):
    """Sum over ordered pairs i != j of exp(-gamma * |a_i - a_j|^2)."""
    impl = impl or _IMPL
    return 2.0 * math.fsum(impl["upper_row_sums"](_prep(a), float(gamma)))


def gauss_paired_sum(a, b, gamma, impl=None):
    """Sum over i of exp(-gamma * |a_i - b_i|^2)."""
    impl = impl or _IMPL
    return math.fsum(impl["paired"](_prep(a), _prep(b), float(gamma)))
