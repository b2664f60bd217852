"""Partition quality scores: modularity and random-walk stability."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition

__all__ = [
    "StabilityCurve",
    "expm",
    "modularity",
    "stability",
    "stationary_distribution",
]

TAYLOR_TERMS = 20
SCALED_NORM = 0.5


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity.

    ``|E|`` counts ordered adjacent pairs (twice the undirected edge count),
    and the within-class sum runs over ordered pairs including ``i == j``,
    so each diagonal term subtracts ``d_i**2 / |E|``.
    """
    if g.num_edges == 0:
        raise ValueError("modularity is undefined on a graph without edges")
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, graph has {g.n}")
    two_m = 2.0 * g.num_edges
    owner = p.membership()
    e = g.edge_array
    # each internal undirected edge gives a_ij = a_ji = 1
    internal = 2.0 * np.count_nonzero(owner[e[:, 0]] == owner[e[:, 1]])
    class_degree = np.bincount(owner, weights=g.degrees.astype(float), minlength=len(p))
    return float((internal - np.sum(class_degree**2) / two_m) / two_m)


def stationary_distribution(g: Graph) -> np.ndarray:
    """Degree-proportional stationary law of the simple random walk."""
    d = g.degrees.astype(float)
    if np.any(d == 0):
        raise ValueError("random walk undefined on isolated vertices")
    return d / d.sum()


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    ``a`` is scaled by ``2**-s`` until its 1-norm is at most 0.5, the series
    is summed to degree 20, and the result is squared ``s`` times.
    """
    a = np.asarray(a, dtype=float)
    norm = np.linalg.norm(a, 1) if a.size else 0.0
    s = max(0, math.ceil(math.log2(norm / SCALED_NORM))) if norm > SCALED_NORM else 0
    b = a / 2.0**s
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, TAYLOR_TERMS + 1):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@dataclass(frozen=True)
class StabilityCurve:
    times: tuple[float, ...]
    values: tuple[float, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in zip(self.times, self.values):
            w.writerow([repr(t), repr(v)])
        return buf.getvalue()


def stability(g: Graph, p: Partition, times) -> StabilityCurve:
    """Stability ``R(P, t)`` of a partition under a unit-rate continuous-time walk.

    The walker starts from the stationary law ``pi`` and jumps along edges
    with kernel ``W = D^-1 A``, so its transition matrix at time ``t`` is
    ``exp(t (W - I))``. For each class ``I``, ``p(I, t)`` is the probability
    of being in ``I`` at time 0 and at time ``t``; ``p(I, inf) = pi(I)**2``.
    """
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, graph has {g.n}")
    times = tuple(float(t) for t in times)
    if any(t < 0 for t in times):
        raise ValueError("times must be non-negative")
    if list(times) != sorted(times):
        raise ValueError("times must be ascending")
    pi = stationary_distribution(g)
    generator = g.adjacency / g.degrees[:, None] - np.eye(g.n)
    H = np.zeros((g.n, len(p)))
    H[np.arange(g.n), p.membership()] = 1.0
    pi_class = H.T @ pi
    values = []
    for t in times:
        K = expm(t * generator)
        within = np.einsum("ik,ij,jk->k", H * pi[:, None], K, H)
        values.append(float(np.sum(within - pi_class**2)))
    return StabilityCurve(times, tuple(values))
