"""Prediction from the sparse model: means, standard errors, t-intervals.

Mean prediction needs only the model payload (epsilon_t, X_t, C_t).  Interval
prediction additionally rebuilds the basis on the full training inputs to
estimate the noise variance and the pointwise fit standard error, so it
requires the original dataset.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegenerateDofError
from .hierarchy import SparseModel
from .kernel import Dataset, kernel_matrix
from .network import _default_jitter, _factor
from .penalty import PenaltySpec, penalty_operator
from .tdist import t_quantile


@dataclass
class PredictionSet:
    """Mean, standard error, and two-sided t-bounds at the query points."""

    X_m: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    alpha: float
    df_res: float
    sigma2_hat: float


def _query_matrix(model: SparseModel, X_m: np.ndarray) -> np.ndarray:
    X_m = np.atleast_2d(np.asarray(X_m, dtype=float))
    if X_m.shape[1] != model.X_t.shape[1]:
        raise ValueError(
            f"query dimension {X_m.shape[1]} does not match model dimension "
            f"{model.X_t.shape[1]}"
        )
    return X_m


def predict_mean(model: SparseModel, X_m: np.ndarray) -> np.ndarray:
    """Kernel basis at the queries times the sparse coefficients.

    Uses only (epsilon_t, X_t, C_t); the training dataset is not touched.
    """
    X_m = _query_matrix(model, X_m)
    B_m = kernel_matrix(X_m, model.X_t, model.epsilon_t)
    return B_m @ model.C_t


def _penalty_at_convergence(model: SparseModel) -> np.ndarray:
    return penalty_operator(PenaltySpec(model.Q_t, model.Lambda_t), model.X_t).P


def _noise_fit(model: SparseModel, dataset: Dataset):
    """Shared CI plumbing: full-data basis, factorization, sigma^2, dof."""
    if dataset.d != model.X_t.shape[1]:
        raise ValueError("training data dimension does not match model")
    n = dataset.n
    B_t = kernel_matrix(dataset.X, model.X_t, model.epsilon_t)
    P_hat = _penalty_at_convergence(model)
    C = B_t.T @ B_t
    factor = _factor(C + n * P_hat, _default_jitter(C))
    V = solve_triangular(factor[0], B_t.T, lower=True)
    tr_u = float(np.sum(V * V))
    M = V @ V.T
    tr_uut = float(np.sum(M * M))
    df_res = n - 2.0 * tr_u + tr_uut
    if df_res <= 0:
        raise DegenerateDofError(
            f"residual degrees of freedom {df_res:.3g} <= 0; intervals suppressed"
        )
    resid = dataset.Y - B_t @ model.C_t
    sigma2 = float(resid @ resid) / df_res
    return factor, sigma2, df_res


def sigma2_hat(model: SparseModel, dataset: Dataset) -> float:
    """Unbiased noise-variance estimate ||Y - B^t C_t||^2 / df_res with
    df_res = n - 2 tr(U) + tr(U U^T)."""
    _, sigma2, _ = _noise_fit(model, dataset)
    return sigma2


def residual_dof(model: SparseModel, dataset: Dataset) -> float:
    """Nonparametric residual degrees of freedom at the convergence scale."""
    _, _, df_res = _noise_fit(model, dataset)
    return df_res


def predict_std(model: SparseModel, dataset: Dataset, X_m: np.ndarray) -> np.ndarray:
    """Pointwise standard error sigma * sqrt(b(x) (B^T B + n P)^{-1} b(x)^T)."""
    X_m = _query_matrix(model, X_m)
    factor, sigma2, _ = _noise_fit(model, dataset)
    B_m = kernel_matrix(X_m, model.X_t, model.epsilon_t)
    V = solve_triangular(factor[0], B_m.T, lower=True)
    quad = np.sum(V * V, axis=0)
    return np.sqrt(sigma2) * np.sqrt(np.maximum(quad, 0.0))


def confidence_intervals(
    mean: np.ndarray, std: np.ndarray, df_res: float, alpha: float
) -> tuple[np.ndarray, np.ndarray]:
    """Two-sided intervals mean -+ t(1 - alpha/2; df_res) * std."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    half = t_quantile(1.0 - alpha / 2.0, df_res) * std
    return mean - half, mean + half


def predict_intervals(
    model: SparseModel, dataset: Dataset, X_m: np.ndarray, alpha: float = 0.05
) -> PredictionSet:
    """Mean prediction with t-confidence bounds at level 1 - alpha."""
    X_m = _query_matrix(model, X_m)
    factor, sigma2, df_res = _noise_fit(model, dataset)
    B_m = kernel_matrix(X_m, model.X_t, model.epsilon_t)
    mean = B_m @ model.C_t
    V = solve_triangular(factor[0], B_m.T, lower=True)
    quad = np.sum(V * V, axis=0)
    std = np.sqrt(sigma2) * np.sqrt(np.maximum(quad, 0.0))
    lower, upper = confidence_intervals(mean, std, df_res, alpha)
    return PredictionSet(
        X_m=X_m,
        mean=mean,
        std=std,
        lower=lower,
        upper=upper,
        alpha=alpha,
        df_res=df_res,
        sigma2_hat=sigma2,
    )
