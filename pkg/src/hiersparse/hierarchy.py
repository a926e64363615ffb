"""Scale sweep: fit one regularization network per scale, keep the cheapest.

Scales are visited in order with epsilon_s = T / M**s until the Gram matrix
reaches full numerical rank (or a safety cap).  The incumbent is replaced
only on strictly smaller GCV cost, so cost ties resolve to the earlier,
sparser scale.  The returned model carries everything mean prediction needs:
the selected points, their coefficients, and the convergence length scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FitError, ScaleUnfitError
from .kernel import Dataset, ScaleConfig, diameter_T, gram, length_scale, numerical_rank
from .network import influence_traces, optimize_gcv
from .penalty import PenaltySpec, penalty_operator
from .sparsify import pivoted_qr_permutation, select_basis, sketch


@dataclass
class ScaleRecord:
    """Per-scale fit summary; ``points`` are the selected coordinates so the
    scale-by-scale selection can be replotted from a saved model alone."""

    s: int
    epsilon_s: float
    l_s: int
    comp_s: float
    cost: float
    lam: np.ndarray | None
    q: tuple[int, ...] | None
    seed: int
    points: np.ndarray


@dataclass
class SparseModel:
    """Convergence-scale payload: sparse representation plus sparse model."""

    t: int
    epsilon_t: float
    X_t: np.ndarray
    Y_t: np.ndarray
    C_t: np.ndarray
    Lambda_t: np.ndarray
    Q_t: tuple[int, ...]
    df_res_inputs: tuple[float, float]
    n_train: int
    history: list[ScaleRecord] = field(default_factory=list)


def compression_ratio(l_s: int, n: int) -> float:
    """Fraction of the dataset dropped by a scale keeping l_s of n points."""
    if not 1 <= l_s <= n:
        raise ValueError(f"l_s={l_s} out of range for n={n}")
    return 1.0 - l_s / n


def fit(
    dataset: Dataset,
    *,
    T: float | str = "auto",
    M: float = 2.0,
    phi: float = 1e-10,
    k_extra: int = 8,
    seed: int = 0,
    max_scales: int = 25,
) -> SparseModel:
    """Sweep scales 0, 1, 2, ... and return the minimum-GCV sparse model.

    Each scale builds the Gram matrix, estimates its numerical rank l_s,
    selects l_s representative points by sketched column-pivoted QR (sketch
    seeded with ``seed + s``), and optimizes the network.  The sweep stops
    once l_s reaches n or ``max_scales`` scales have been fit.  A scale whose
    optimization degenerates is recorded with infinite cost and skipped.
    """
    X, Y, n = dataset.X, dataset.Y, dataset.n
    if n < 2:
        raise ValueError("need at least two points to fit")
    T_val = diameter_T(X) if isinstance(T, str) else float(T)
    ScaleConfig(T=T_val, M=M, phi=phi, k_extra=k_extra)  # validates the knob set

    history: list[ScaleRecord] = []
    best = None
    s = 0
    l_s = 0
    while l_s < n and s < max_scales:
        eps = length_scale(T_val, M, s)
        gm = gram(X, eps)
        l_s = numerical_rank(gm.G, phi)
        scale_seed = seed + s
        W = sketch(gm.G, l_s, k_extra, scale_seed)
        pivot = pivoted_qr_permutation(W.W)
        basis = select_basis(gm.G, pivot, l_s)
        centers = X[basis.selected]
        comp = compression_ratio(l_s, n)
        try:
            fs = optimize_gcv(basis.B, Y, centers, n)
        except ScaleUnfitError:
            history.append(
                ScaleRecord(s, eps, l_s, comp, np.inf, None, None, scale_seed, centers)
            )
            s += 1
            continue
        history.append(
            ScaleRecord(s, eps, l_s, comp, fs.cost, fs.lam, fs.q, scale_seed, centers)
        )
        if best is None or fs.cost < best["cost"]:
            P_hat = penalty_operator(PenaltySpec(fs.q, fs.lam), centers).P
            tr_u, tr_uut = influence_traces(basis.B, P_hat, n)
            best = {
                "cost": fs.cost,
                "t": s,
                "epsilon_t": eps,
                "X_t": centers,
                "Y_t": Y[basis.selected].copy(),
                "C_t": fs.theta,
                "Lambda_t": fs.lam,
                "Q_t": fs.q,
                "traces": (tr_u, tr_uut),
            }
        s += 1

    if best is None:
        raise FitError("no scale produced a usable fit")
    return SparseModel(
        t=best["t"],
        epsilon_t=best["epsilon_t"],
        X_t=best["X_t"],
        Y_t=best["Y_t"],
        C_t=best["C_t"],
        Lambda_t=best["Lambda_t"],
        Q_t=best["Q_t"],
        df_res_inputs=best["traces"],
        n_train=n,
        history=history,
    )
