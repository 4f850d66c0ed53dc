"""Feature maps and approximate kernel evaluation for both estimators.

The feature layout is pinned for serialization stability: p sines first, then
p cosines, all scaled by 1/sqrt(p).  The resulting kernel estimate

    k(x, y) = phi(x) . phi(y) = (1/p) sum_j cos(w_j . (x - y))

depends only on x - y.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .sampling import WeightMatrix


def _check_point(W: WeightMatrix, x: np.ndarray, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (W.d,):
        raise InvalidArgumentError(
            f"{name} has shape {x.shape}, weight matrix expects ({W.d},)"
        )
    return x


def feature_map(W: WeightMatrix, x: np.ndarray) -> np.ndarray:
    """Length-2p feature vector (sines then cosines, scaled 1/sqrt(p))."""
    x = _check_point(W, x)
    proj = W.entries.T @ x
    return np.concatenate([np.sin(proj), np.cos(proj)]) / np.sqrt(W.p)


def approx_kernel(W: WeightMatrix, x: np.ndarray, y: np.ndarray) -> float:
    """(1/p) sum_j cos(w_j . (x - y)); equals feature_map(x) . feature_map(y)."""
    x = _check_point(W, x)
    y = _check_point(W, y, "y")
    return float(np.mean(np.cos(W.entries.T @ (x - y))))


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Approximate kernel matrix plus the identity of the weights that built it."""

    entries: np.ndarray = field(repr=False)
    kind: str
    seed: int
    d: int
    p: int


def gram_matrix(W: WeightMatrix, X: np.ndarray) -> GramMatrix:
    """Approximate Gram matrix of the rows of X, via the explicit feature matrix.

    Computed as an n x 2p feature product (O(n^2 p), cache friendly), then
    symmetrized and given an exactly unit diagonal; both adjustments are at
    roundoff level of the pairwise-cosine definition.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != W.d:
        raise InvalidArgumentError(
            f"data has shape {X.shape}, weight matrix expects (n, {W.d})"
        )
    if X.shape[0] == 0:
        raise InvalidArgumentError("data must contain at least one point")
    proj = X @ W.entries
    phi = np.concatenate([np.sin(proj), np.cos(proj)], axis=1) / np.sqrt(W.p)
    K = phi @ phi.T
    K = (K + K.T) / 2.0
    np.fill_diagonal(K, 1.0)
    return GramMatrix(entries=K, kind=W.kind, seed=W.seed, d=W.d, p=W.p)


def gram_matrix_pairwise(W: WeightMatrix, X: np.ndarray) -> GramMatrix:
    """Brute-force pairwise construction; retained as the oracle for gram_matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != W.d:
        raise InvalidArgumentError(
            f"data has shape {X.shape}, weight matrix expects (n, {W.d})"
        )
    if X.shape[0] == 0:
        raise InvalidArgumentError("data must contain at least one point")
    n = X.shape[0]
    K = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            K[i, j] = approx_kernel(W, X[i], X[j])
    return GramMatrix(entries=K, kind=W.kind, seed=W.seed, d=W.d, p=W.p)
