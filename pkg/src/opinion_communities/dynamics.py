"""Opinion dynamics with a geometrically decaying confidence bound.

At step ``t`` agent ``i`` listens to the graph neighbours whose opinion lies
within ``R * rho**t`` of its own and moves a fraction ``alpha`` towards their
mean. Edges currently inside the bound form the interaction set ``E(t)``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .graph import Graph

__all__ = [
    "NotStabilizedError",
    "OpinionTrace",
    "SimulationConfig",
    "WEIGHT_MODES",
    "check_convergence_bound",
    "confidence_neighborhood",
    "estimate_convergence_rate",
    "sample_initial_opinions",
    "simulate",
    "step",
]

WEIGHT_MODES = ("degree_average", "metropolis")
PRECISIONS = {"double": np.float64, "extended": np.longdouble}

# samples of |x_i(t) - x_i*| below NOISE_FACTOR * eps * scale are rounding noise
NOISE_FACTOR = 1e3
MIN_RATE_SAMPLES = 10
MIN_WINDOW = 50


class NotStabilizedError(ValueError):
    """Raised when an operation needs a trace whose interaction graph settled."""


@dataclass(frozen=True)
class SimulationConfig:
    R: float = 1.0
    rho: float = 0.98
    alpha: float = 0.1
    weight_mode: str = "degree_average"
    eps_stop: float | None = None
    stable_window: int | None = None
    max_steps: int = 100_000
    seed: int | None = None
    precision: str = "extended"

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R}")
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if not 0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2), got {self.alpha}")
        if self.weight_mode not in WEIGHT_MODES:
            raise ValueError(f"weight_mode must be one of {WEIGHT_MODES}, got {self.weight_mode!r}")
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {sorted(PRECISIONS)}, got {self.precision!r}")
        if self.eps_stop is not None and not self.eps_stop > 0:
            raise ValueError("eps_stop must be positive")
        if (self.stable_window is not None and self.stable_window < 1) or self.max_steps < 1:
            raise ValueError("stable_window and max_steps must be >= 1")

    @property
    def dtype(self):
        return PRECISIONS[self.precision]

    @property
    def stop_threshold(self) -> float:
        """``eps_stop``, or 1000 machine epsilons of the working precision.

        Below that the bound is within rounding distance of the opinions
        and interaction sets stop meaning anything.
        """
        if self.eps_stop is not None:
            return self.eps_stop
        return float(NOISE_FACTOR * np.finfo(self.dtype).eps)

    @property
    def window(self) -> int:
        """``stable_window``, or enough steps for the residual-motion envelope
        ``2 R rho^T / (1 - rho)`` to fall below the bound at the window start
        (never fewer than 50)."""
        if self.stable_window is not None:
            return self.stable_window
        return max(MIN_WINDOW, math.ceil(math.log(2 / (1 - self.rho)) / -math.log(self.rho)))

    def bound(self, t: int):
        """Confidence bound ``R * rho**t`` in the working precision."""
        dt = self.dtype
        return dt(self.R) * dt(self.rho) ** t


@dataclass(frozen=True, eq=False)
class OpinionTrace:
    """Recorded run of :func:`simulate`.

    ``x[t]`` is the opinion vector at step ``t`` (``t = 0..T_end``) and
    ``active[t]`` masks the rows of ``edges`` that were in ``E(t)`` for
    ``t = 0..T_end-1``. ``final_active`` is the mask of ``G(T_end)``.
    """

    graph: Graph
    config: SimulationConfig
    x: np.ndarray
    active: np.ndarray
    final_active: np.ndarray
    t_stable: int | None
    stabilized: bool = field(default=False)

    @property
    def T_end(self) -> int:
        return self.x.shape[0] - 1

    @property
    def edges(self) -> np.ndarray:
        return self.graph.edge_array

    @property
    def x_final(self) -> np.ndarray:
        return self.x[-1]

    def interaction_set(self, t: int) -> frozenset[tuple[int, int]]:
        mask = self.final_active if t == self.T_end else self.active[t]
        return frozenset(map(tuple, self.edges[mask].tolist()))

    @property
    def interaction_history(self) -> list[frozenset[tuple[int, int]]]:
        return [self.interaction_set(t) for t in range(self.T_end)]

    @cached_property
    def final_graph(self) -> Graph:
        return Graph(self.graph.n, self.edges[self.final_active], labels=self.graph.labels)

    def summary(self) -> dict:
        return {
            "T_end": self.T_end,
            "t_stable": self.t_stable,
            "stabilized": self.stabilized,
            "final_bound": float(self.config.bound(self.T_end)),
            "final_edges": int(self.final_active.sum()),
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        """Long-format dump with columns ``t, agent, opinion``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "agent", "opinion"])
        labels = self.graph.labels
        for t, row in enumerate(self.x):
            for i, v in enumerate(row.tolist()):
                w.writerow([t, labels[i], repr(v)])
        return buf.getvalue()


def _active_mask(edges: np.ndarray, x: np.ndarray, bound: float) -> np.ndarray:
    return np.abs(x[edges[:, 0]] - x[edges[:, 1]]) <= bound


def _net_inflow(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``out[i] = sum of w over edges (i, .) minus sum over edges (., i)``."""
    if w.dtype == np.float64:
        return np.bincount(u, w, minlength=n) - np.bincount(v, w, minlength=n)
    # bincount would round weights to float64
    out = np.zeros(n, dtype=w.dtype)
    np.add.at(out, u, w)
    np.subtract.at(out, v, w)
    return out


def _update(n: int, edges: np.ndarray, mask: np.ndarray, x: np.ndarray, alpha: float, mode: str) -> np.ndarray:
    u = edges[mask, 0]
    v = edges[mask, 1]
    diff = x[v] - x[u]
    deg = np.bincount(u, minlength=n) + np.bincount(v, minlength=n)
    a = x.dtype.type(alpha)
    if mode == "degree_average":
        pull = _net_inflow(n, u, v, diff)
        return x + np.where(deg > 0, a * pull / np.maximum(deg, 1), 0)
    # metropolis: symmetric weights, so what i gains j loses
    flow = a / (1 + np.maximum(deg[u], deg[v])) * diff
    return x + _net_inflow(n, u, v, flow)


def confidence_neighborhood(g: Graph, x, t: int, cfg: SimulationConfig, i: int) -> set[int]:
    """Neighbours ``j`` of ``i`` with ``|x_i - x_j| <= R * rho**t``."""
    x = np.asarray(x, dtype=cfg.dtype)
    b = cfg.bound(t)
    return {j for j in g.neighbors(i) if abs(x[i] - x[j]) <= b}


def step(g: Graph, x, t: int, cfg: SimulationConfig) -> tuple[np.ndarray, frozenset[tuple[int, int]]]:
    """One synchronous update. Returns ``x(t+1)`` and the interaction set ``E(t)``."""
    x = np.asarray(x, dtype=cfg.dtype)
    if x.shape != (g.n,):
        raise ValueError(f"opinion vector must have shape ({g.n},)")
    mask = _active_mask(g.edge_array, x, cfg.bound(t))
    x_new = _update(g.n, g.edge_array, mask, x, cfg.alpha, cfg.weight_mode)
    return x_new, frozenset(map(tuple, g.edge_array[mask].tolist()))


def simulate(g: Graph, x0, cfg: SimulationConfig) -> OpinionTrace:
    """Iterate :func:`step` until the bound is below ``cfg.stop_threshold``
    and ``E(t)`` has been identical for ``cfg.window`` consecutive steps.

    Hitting ``max_steps`` first returns a trace with ``stabilized=False``.
    """
    x = np.array(x0, dtype=cfg.dtype)
    if x.shape != (g.n,):
        raise ValueError(f"x0 must have shape ({g.n},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 must be finite")
    edges = g.edge_array
    threshold = cfg.stop_threshold
    window = cfg.window
    xs = [x]
    masks = []
    prev = None
    run = 0
    t = 0
    stabilized = False
    while True:
        b = cfg.bound(t)
        mask = _active_mask(edges, x, b)
        run = run + 1 if prev is not None and np.array_equal(mask, prev) else 1
        if b < threshold and run >= window:
            stabilized = True
            break
        if t >= cfg.max_steps:
            break
        x = _update(g.n, edges, mask, x, cfg.alpha, cfg.weight_mode)
        xs.append(x)
        masks.append(mask)
        prev = mask
        t += 1

    active = np.array(masks, dtype=bool).reshape(len(masks), len(edges))
    return OpinionTrace(
        graph=g,
        config=cfg,
        x=np.array(xs),
        active=active,
        final_active=mask,
        t_stable=t - run + 1 if stabilized else None,
        stabilized=stabilized,
    )


def sample_initial_opinions(n: int, seed) -> np.ndarray:
    """``n`` i.i.d. uniform draws on [0, 1). ``seed`` is anything
    :func:`numpy.random.default_rng` accepts (int, SeedSequence, ...)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.random.default_rng(seed).random(n)


def _require_stable(trace: OpinionTrace):
    if not trace.stabilized:
        raise NotStabilizedError(f"trace did not stabilize within {trace.T_end} steps")


def check_convergence_bound(trace: OpinionTrace, cfg: SimulationConfig | None = None) -> float:
    """Largest excess of ``|x_i(t) - x_i(T_end)|`` over ``R/(1-rho) * rho**t``.

    Non-positive (up to rounding) whenever the run obeys the geometric
    convergence envelope.
    """
    _require_stable(trace)
    cfg = cfg or trace.config
    t = np.arange(trace.T_end + 1)
    dt = trace.x.dtype.type
    envelope = dt(cfg.R) / (1 - dt(cfg.rho)) * np.power(dt(cfg.rho), t.astype(trace.x.dtype))
    gap = np.abs(trace.x - trace.x_final)
    return float(np.max(gap - envelope[:, None]))


def estimate_convergence_rate(trace: OpinionTrace) -> np.ndarray:
    """Per-agent geometric convergence rate.

    Fits ``log|x_i(t) - x_i(T_end)|`` linearly in ``t`` over the steps after
    the interaction graph settled, stopping at the first sample that falls to
    rounding-noise level. Returns ``exp(slope)`` per agent, with NaN for
    agents that already sit at their limit (fewer than 10 usable samples).
    """
    _require_stable(trace)
    tail = trace.x[trace.t_stable:-1]
    gap = np.abs(tail - trace.x_final)
    scale = max(float(np.max(np.abs(trace.x))), np.finfo(float).tiny)
    floor = NOISE_FACTOR * np.finfo(trace.x.dtype).eps * scale
    above = gap > floor
    # usable samples: the leading run above the noise floor
    usable = np.cumprod(above, axis=0).astype(bool)
    counts = usable.sum(axis=0)
    t = np.arange(tail.shape[0], dtype=float)
    rates = np.full(trace.graph.n, np.nan)
    for i in np.flatnonzero(counts >= MIN_RATE_SAMPLES):
        k = counts[i]
        slope = np.polyfit(t[:k], np.log(gap[:k, i].astype(float)), 1)[0]
        rates[i] = np.exp(slope)
    return rates
