"""Squared-exponential Gram matrices indexed by a geometric scale ladder.

The length scale at step ``s`` is ``epsilon_s = T / M**s``: every increment
shrinks the kernel support by ``1/M`` (default halving), enlarging the
numerical rank of the Gram matrix until it saturates at ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError


@dataclass(frozen=True)
class Dataset:
    """Observed sample: coordinates ``X`` (n x d) and responses ``Y`` (n)."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        Y = np.asarray(self.Y, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"X must be a nonempty n x d matrix, got shape {X.shape}")
        if X.shape[0] != Y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]} entries")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains nonfinite coordinates")
        if not np.all(np.isfinite(Y)):
            raise ValueError("Y contains nonfinite observations")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class ScaleConfig:
    """Scale-ladder parameters; ``epsilon_s`` is always ``T / M**s``."""

    T: float
    M: float = 2.0
    s: int = 0
    phi: float = 1e-10
    k_extra: int = 8

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if not self.M > 1:
            raise ValueError("M must exceed 1")
        if self.s < 0:
            raise ValueError("scale index must be nonnegative")
        if not 0 < self.phi < 1:
            raise ValueError("phi must lie in (0, 1)")
        if self.k_extra < 0:
            raise ValueError("k_extra must be nonnegative")

    @property
    def epsilon_s(self) -> float:
        return length_scale(self.T, self.M, self.s)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric unit-diagonal kernel matrix together with its length scale."""

    G: np.ndarray
    epsilon_s: float


def diameter_T(X: np.ndarray) -> float:
    """Base length scale from the most distant pair: ``diam(X)**2 / 2``."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] < 2:
        raise ValueError("need at least two points to measure a diameter")
    d2 = _sq_distances(X, X)
    diam2 = float(d2.max())
    if diam2 == 0.0:
        raise DegenerateGeometryError("all points are identical; diameter is zero")
    return diam2 / 2.0


def length_scale(T: float, M: float, s: int) -> float:
    """Kernel support at scale ``s``: ``T / M**s``, strictly decreasing in s."""
    if not T > 0:
        raise ValueError("T must be positive")
    if not M > 1:
        raise ValueError("M must exceed 1")
    if s < 0:
        raise ValueError("scale index must be nonnegative")
    return T / M**s


def _sq_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # stable expansion, clamped: round-off can push ||a||^2+||b||^2-2ab below 0
    ra = np.sum(A * A, axis=1)
    rb = np.sum(B * B, axis=1)
    d2 = ra[:, None] + rb[None, :] - 2.0 * (A @ B.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def kernel_matrix(A: np.ndarray, B: np.ndarray, epsilon: float) -> np.ndarray:
    """Cross kernel ``exp(-||a_i - b_j||^2 / epsilon)`` for rows of A and B."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
        raise ValueError("nonfinite coordinates")
    return np.exp(-_sq_distances(A, B) / epsilon)


def gram(X: np.ndarray, epsilon_s: float) -> GramMatrix:
    """Scale-s Gram matrix on X; exactly symmetric with unit diagonal."""
    G = kernel_matrix(X, X, epsilon_s)
    lower = np.tril(G, -1)
    G = lower + lower.T
    np.fill_diagonal(G, 1.0)
    return GramMatrix(G=G, epsilon_s=float(epsilon_s))


def numerical_rank(G: np.ndarray, phi: float) -> int:
    """Count of singular values within relative precision ``phi`` of the top.

    A zero matrix reports rank 0; that is a signal, not a failure.
    """
    if not 0 < phi < 1:
        raise ValueError("phi must lie in (0, 1)")
    G = np.asarray(G, dtype=float)
    sv = np.linalg.svd(G, compute_uv=False, hermitian=True)
    if sv.size == 0 or sv[0] <= 0.0:
        return 0
    return int(np.count_nonzero(sv / sv[0] >= phi))
