"""Community extraction from a settled opinion trace.

Two independent routes are run: connected components of the final
interaction graph, and single-linkage clustering of the final opinions.
The first is authoritative; disagreement is reported, not raised.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .dynamics import OpinionTrace, SimulationConfig, _require_stable
from .graph import Graph, Partition, connected_components, induced_subgraph
from .spectral import mu2

__all__ = [
    "CommunityResult",
    "communities_from_interaction_graph",
    "communities_from_opinions",
    "default_tolerance",
    "extract",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommunityResult:
    partition: Partition
    limit_opinions: tuple[float, ...]
    source: str
    agreement_flag: bool
    mu2_per_class: tuple[float | None, ...]
    problem1_satisfied: bool
    delta: float
    labels: tuple = ()
    # largest within-class spread and smallest between-class gap of final opinions
    max_spread: float = 0.0
    min_gap: float = float("inf")

    @property
    def min_mu2(self) -> float | None:
        vals = [m for m in self.mu2_per_class if m is not None]
        return min(vals) if vals else None

    def to_dict(self) -> dict:
        labels = self.labels or tuple(range(self.partition.n))
        classes = []
        for c, lim, m in zip(self.partition.classes, self.limit_opinions, self.mu2_per_class):
            classes.append({
                "members": sorted((labels[i] for i in c), key=lambda v: (str(type(v)), v)),
                "limit_opinion": lim,
                "mu2": m,
            })
        return {
            "delta": self.delta,
            "source": self.source,
            "agreement_flag": self.agreement_flag,
            "problem1_satisfied": self.problem1_satisfied,
            "min_mu2": self.min_mu2,
            "classes": classes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def communities_from_interaction_graph(g: Graph, trace: OpinionTrace) -> Partition:
    """Connected components of the final interaction graph ``G(T_end)``."""
    _require_stable(trace)
    if trace.graph.n != g.n:
        raise ValueError("trace was not produced on this graph")
    return connected_components(trace.final_graph)


def default_tolerance(trace: OpinionTrace) -> float:
    """Twice the residual motion envelope ``R rho^T / (1 - rho)`` plus rounding slack."""
    cfg = trace.config
    return float(2 * cfg.bound(trace.T_end) / (1 - cfg.rho)) + 1e3 * float(np.finfo(trace.x.dtype).eps)


def _gaps(x: np.ndarray):
    order = np.argsort(x, kind="stable")
    return order, np.diff(x[order])


def communities_from_opinions(trace: OpinionTrace, tolerance: float | None = None) -> Partition:
    """Single-linkage clusters of ``x(T_end)``: sort, then cut at gaps strictly
    larger than ``tolerance``."""
    _require_stable(trace)
    if tolerance is None:
        tolerance = default_tolerance(trace)
    order, gaps = _gaps(trace.x_final)
    cluster = np.concatenate([[0], np.cumsum(gaps > tolerance)])
    labels = np.empty_like(cluster)
    labels[order] = cluster
    return Partition.from_labels(labels)


def _opinion_spread(x: np.ndarray, p: Partition) -> tuple[float, float]:
    spread = max(float(np.ptp(x[list(c)])) for c in p.classes)
    lo = sorted((float(x[list(c)].min()), float(x[list(c)].max())) for c in p.classes)
    gap = min((b[0] - a[1] for a, b in zip(lo, lo[1:])), default=float("inf"))
    return spread, gap


def extract(g: Graph, trace: OpinionTrace, cfg: SimulationConfig | None = None, delta: float | None = None,
            tolerance: float | None = None) -> CommunityResult:
    """Communities of a settled run and whether each class is connected enough.

    ``delta`` defaults to ``(1 - rho) / alpha``, the connectivity level the
    decay rate enforces. A class of two or more agents passes when its
    induced subgraph has ``mu2 > delta``.
    """
    cfg = cfg or trace.config
    if delta is None:
        delta = (1.0 - cfg.rho) / cfg.alpha
    part = communities_from_interaction_graph(g, trace)
    clustered = communities_from_opinions(trace, tolerance)
    agree = part == clustered
    x = trace.x_final
    spread, gap = _opinion_spread(x, part)
    if not agree:
        log.warning(
            "extraction routes disagree: %d graph classes vs %d opinion clusters "
            "(max within-class spread %.3g, min between-class gap %.3g, tolerance %.3g)",
            len(part), len(clustered), spread, gap,
            default_tolerance(trace) if tolerance is None else tolerance,
        )
    mus: list[float | None] = []
    for c in part.classes:
        if len(c) < 2:
            mus.append(None)
        else:
            sub, _ = induced_subgraph(g, c)
            mus.append(mu2(sub))
    ok = all(m > delta for m in mus if m is not None)
    limits = tuple(float(np.mean(x[list(c)])) for c in part.classes)
    return CommunityResult(
        partition=part,
        limit_opinions=limits,
        source="interaction_graph",
        agreement_flag=agree,
        mu2_per_class=tuple(mus),
        problem1_satisfied=ok,
        delta=float(delta),
        labels=g.labels,
        max_spread=spread,
        min_gap=gap,
    )
