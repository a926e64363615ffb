"""Representative-point selection: randomized sketch + column-pivoted QR.

The Gram matrix of numerical rank ``l`` is compressed to a short sketch
``W = A G`` (``A`` Gaussian), and greedy column-pivoted QR on ``W`` picks the
``l`` columns with the largest residual norms.  Those column indices are the
sparse point set; the matching Gram columns form the regression basis.

The QR pivoting is implemented here rather than delegated so that the pivot
order (including the lowest-original-index tie-break) is bit-stable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SketchMatrix:
    """Bias-removal sketch ``W = A G`` with ``k = min(n, l_s + k_extra)`` rows."""

    W: np.ndarray
    k: int
    seed: int


@dataclass(frozen=True)
class ScaleBasis:
    """Pivot order, the first ``l_s`` selected indices, and their Gram columns."""

    pivot: np.ndarray
    selected: np.ndarray
    B: np.ndarray
    l_s: int


def sketch(G: np.ndarray, l_s: int, k_extra: int, seed: int) -> SketchMatrix:
    """Project G onto ``k`` random Gaussian rows; deterministic per seed."""
    G = np.asarray(G, dtype=float)
    if l_s < 1:
        raise ValueError("rank must be at least 1")
    n = G.shape[0]
    k = min(n, l_s + k_extra)
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((k, n))
    return SketchMatrix(W=A @ G, k=k, seed=seed)


def pivoted_qr(W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder QR with greedy max-norm column pivoting.

    Returns the full column permutation and the diagonal of R.  Residual
    column norms are recomputed at every step (not downdated), so the pivot
    sequence coincides with the greedy Gram-Schmidt selection oracle and
    ``|diag(R)|`` is nonincreasing.  Ties pick the lowest original index.
    """
    R = np.array(W, dtype=float)
    if R.ndim != 2:
        raise ValueError("W must be a matrix")
    if not np.any(R):
        raise ValueError("cannot pivot an all-zero matrix")
    k, n = R.shape
    perm = np.arange(n)
    steps = min(k, n)
    rdiag = np.zeros(steps)
    for j in range(steps):
        norms = np.sqrt(np.sum(R[j:, j:] ** 2, axis=0))
        top = norms.max()
        if top == 0.0:
            break  # remaining columns exhausted; keep their current order
        tied = np.flatnonzero(norms == top)
        pick = j + tied[np.argmin(perm[j + tied])]
        if pick != j:
            R[:, [j, pick]] = R[:, [pick, j]]
            perm[[j, pick]] = perm[[pick, j]]
        x = R[j:, j]
        alpha = -np.copysign(np.linalg.norm(x), x[0] if x[0] != 0.0 else 1.0)
        v = x.copy()
        v[0] -= alpha
        vv = v @ v
        if vv > 0.0:
            R[j:, j:] -= np.outer(v, (2.0 / vv) * (v @ R[j:, j:]))
        R[j, j] = alpha
        R[j + 1 :, j] = 0.0
        rdiag[j] = alpha
    return perm, rdiag


def pivoted_qr_permutation(W: np.ndarray) -> np.ndarray:
    """Column permutation of the pivoted QR factorization of W."""
    perm, _ = pivoted_qr(W)
    return perm


def select_basis(G: np.ndarray, pivot: np.ndarray, l_s: int) -> ScaleBasis:
    """Assemble the basis from the top ``l_s`` pivoted Gram columns."""
    G = np.asarray(G, dtype=float)
    pivot = np.asarray(pivot, dtype=int)
    n = G.shape[0]
    if not 1 <= l_s <= n:
        raise ValueError(f"rank {l_s} out of range for n={n}")
    selected = pivot[:l_s].copy()
    if np.unique(selected).size != l_s:
        raise ValueError("pivot contains repeated indices")
    B = G[:, selected].copy()
    return ScaleBasis(pivot=pivot.copy(), selected=selected, B=B, l_s=int(l_s))
