"""Normalized Laplacian spectra and the averaging update matrix.

For a graph ``G'`` and step weight ``alpha`` the averaging rule applies
``P(G') = I - alpha * Q(G')`` with ``Q = D^-1 (D - A)`` on non-isolated rows.
``Q`` and the normalized Laplacian ``L`` are similar, so the spectrum of
``P`` is ``{1 - alpha * mu : mu in spec(L)}``. Everything here works on
dense arrays; community blocks are small.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import Graph, connected_components

__all__ = [
    "SYMMETRY_TOL",
    "lambda2_check",
    "mu2",
    "normalized_laplacian",
    "sym_eigenvalues",
    "update_matrix",
    "verify_eigen_correspondence",
]

SYMMETRY_TOL = 1e-12


def normalized_laplacian(g: Graph) -> np.ndarray:
    """``L_ii = 1`` for non-isolated ``i``, ``L_ij = -1/sqrt(d_i d_j)`` on edges."""
    d = g.degrees.astype(float)
    L = np.zeros((g.n, g.n))
    L[np.diag_indices(g.n)] = (d > 0).astype(float)
    i, j = g.edge_array[:, 0], g.edge_array[:, 1]
    w = -1.0 / np.sqrt(d[i] * d[j])
    L[i, j] = w
    L[j, i] = w
    return L


def sym_eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix.

    Raises ValueError if ``m`` is asymmetric beyond ``SYMMETRY_TOL``
    (entrywise, scaled by the largest entry).
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.T)) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    # LAPACK syevd on the symmetrized copy; returns ascending values
    return np.linalg.eigvalsh(0.5 * (m + m.T))


def mu2(g: Graph) -> float:
    """Second smallest eigenvalue of the normalized Laplacian.

    Zero exactly when ``g`` is disconnected (isolated vertices included).
    """
    if g.n < 2:
        raise ValueError("mu2 needs at least two vertices")
    if len(connected_components(g)) > 1:
        return 0.0
    return float(sym_eigenvalues(normalized_laplacian(g))[1])


def update_matrix(g_sub: Graph, alpha: float) -> np.ndarray:
    """Row-stochastic ``P = I - alpha * Q`` of the degree-averaging rule."""
    if not 0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    d = g_sub.degrees.astype(float)
    Q = np.zeros((g_sub.n, g_sub.n))
    Q[np.diag_indices(g_sub.n)] = (d > 0).astype(float)
    i, j = g_sub.edge_array[:, 0], g_sub.edge_array[:, 1]
    Q[i, j] = -1.0 / d[i]
    Q[j, i] = -1.0 / d[j]
    return np.eye(g_sub.n) - alpha * Q


def verify_eigen_correspondence(g_sub: Graph, alpha: float) -> float:
    """Max mismatch between ``spec(L)`` and ``{(1 - lam)/alpha : lam in spec(P)}``.

    ``spec(P)`` comes from a general (non-symmetric) eigensolve so the two
    sides are computed independently; values are paired by an optimal
    assignment before taking the largest absolute difference.
    """
    if g_sub.n < 2:
        raise ValueError("need at least two vertices")
    mu = sym_eigenvalues(normalized_laplacian(g_sub))
    lam = np.linalg.eigvals(update_matrix(g_sub, alpha))
    from_p = (1.0 - lam) / alpha
    cost = np.abs(mu[:, None] - from_p[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def lambda2_check(g_sub: Graph, alpha: float, rho: float) -> bool:
    """Whether the community's second update eigenvalue ``1 - alpha*mu2``
    is below ``rho`` (equivalently ``mu2 > delta`` when ``rho = 1 - alpha*delta``)."""
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if g_sub.n < 2:
        raise ValueError("need at least two vertices")
    if len(connected_components(g_sub)) > 1:
        raise ValueError("graph is disconnected; only connected communities qualify")
    return 1.0 - alpha * mu2(g_sub) < rho
