"""Difference-based smoothing penalties composed across dimensions.

Coefficients live on the selected centers in pivot order.  For each dimension
``i`` a permutation operator reorders them by nondecreasing center coordinate,
an order-``q_i`` difference matrix penalizes their successive changes, and the
weighted quadratic forms are summed:

    P = sum_i lambda_i * Pe_i^T D^{q_i}^T D^{q_i} Pe_i

Orders are restricted to q in {1, 2}; higher orders oversmooth.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np


@dataclass(frozen=True)
class PenaltySpec:
    """Per-dimension difference orders (each 1 or 2) and positive weights."""

    Q: tuple[int, ...]
    Lambda: np.ndarray

    def __post_init__(self):
        Q = tuple(int(q) for q in self.Q)
        lam = np.asarray(self.Lambda, dtype=float).ravel()
        if len(Q) != lam.size:
            raise ValueError("Q and Lambda must have one entry per dimension")
        if any(q not in (1, 2) for q in Q):
            raise ValueError("penalty orders must be 1 or 2")
        if not np.all(lam > 0):
            raise ValueError("all penalty weights must be positive")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "Lambda", lam)


@dataclass(frozen=True)
class PenaltyMatrix:
    """Total operator P plus the unweighted per-dimension components."""

    P: np.ndarray
    per_dim: tuple[np.ndarray, ...]


def difference_matrix(q: int, m: int) -> np.ndarray:
    """Order-q forward difference operator on m coefficients.

    Row r applies the q-th difference ending at position r+q: binomial
    coefficients with alternating signs, e.g. (-1, 1) for q=1 and
    (1, -2, 1) for q=2.  Returns an empty (0 x m) matrix when m <= q.
    """
    if q < 1:
        raise ValueError("difference order must be at least 1")
    if m <= q:
        return np.zeros((0, m))
    stencil = np.array([(-1.0) ** (q - j) * comb(q, j) for j in range(q + 1)])
    D = np.zeros((m - q, m))
    for r in range(m - q):
        D[r, r : r + q + 1] = stencil
    return D


def permutation_operator(points: np.ndarray, dim: int) -> np.ndarray:
    """Permutation matrix sorting coefficients by coordinate in ``dim``.

    Row r of the result selects the coefficient whose center has the r-th
    smallest coordinate; exact ties keep their basis (pivot) order.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if not 0 <= dim < points.shape[1]:
        raise ValueError(f"dimension {dim} out of range for d={points.shape[1]}")
    order = np.argsort(points[:, dim], kind="stable")
    m = points.shape[0]
    Pe = np.zeros((m, m))
    Pe[np.arange(m), order] = 1.0
    return Pe


def penalty_components(Q, points: np.ndarray) -> list[np.ndarray]:
    """Unweighted quadratic forms Psi_i = (D^{q_i} Pe_i)^T (D^{q_i} Pe_i)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    m = points.shape[0]
    comps = []
    for i, q in enumerate(Q):
        D = difference_matrix(int(q), m)
        if D.shape[0] == 0:
            # fewer coefficients than the stencil: this dimension contributes nothing
            comps.append(np.zeros((m, m)))
            continue
        F = D @ permutation_operator(points, i)
        psi = F.T @ F
        comps.append((psi + psi.T) / 2.0)
    return comps


def penalty_operator(spec: PenaltySpec, points: np.ndarray) -> PenaltyMatrix:
    """Weighted sum of the per-dimension difference forms; symmetric PSD."""
    comps = penalty_components(spec.Q, points)
    m = comps[0].shape[0]
    P = np.zeros((m, m))
    for lam_i, psi in zip(spec.Lambda, comps):
        P += lam_i * psi
    return PenaltyMatrix(P=P, per_dim=tuple(comps))
