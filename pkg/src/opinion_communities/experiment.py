"""Monte-Carlo community detection runs and their reports.

Each run draws uniform initial opinions from a seed derived from
``(spec.seed, run index)``, simulates the decaying-confidence dynamics with
``rho = 1 - alpha * delta`` and extracts the communities. Runs are then
grouped by canonical partition key.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .community import extract
from .dynamics import (
    SimulationConfig,
    check_convergence_bound,
    estimate_convergence_rate,
    sample_initial_opinions,
    simulate,
)
from .fixtures import FIXTURES, load_fixture
from .graph import Graph, Partition, load_edge_list, to_dot
from .quality import modularity, stability

__all__ = [
    "ExperimentReport",
    "ExperimentSpec",
    "PartitionStats",
    "ConnectivityViolation",
    "SCHEMA_VERSION",
    "delta_sweep",
    "emit_report",
    "load_graph",
    "run_experiment",
    "run_seed",
    "sweep_summary",
]

SCHEMA_VERSION = 1

log = logging.getLogger(__name__)


class ConnectivityViolation(AssertionError):
    """A run whose two extraction routes agree produced a class with mu2 <= delta."""


@dataclass(frozen=True)
class ExperimentSpec:
    delta: float
    graph_path: str | None = None
    fixture: str | None = None
    R: float = 1.0
    alpha: float = 0.1
    runs: int = 100
    seed: int = 0
    weight_mode: str = "degree_average"
    stability_times: tuple[float, ...] = ()
    eps_stop: float | None = None
    stable_window: int | None = None
    max_steps: int = 100_000
    precision: str = "extended"
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.graph_path is None and self.fixture is None:
            raise ValueError("need a graph_path or a fixture name")
        object.__setattr__(self, "stability_times", tuple(float(t) for t in self.stability_times))
        self.config()  # validates R, alpha, rho, weight_mode

    @property
    def rho(self) -> float:
        return 1.0 - self.alpha * self.delta

    def config(self) -> SimulationConfig:
        return SimulationConfig(
            R=self.R, rho=self.rho, alpha=self.alpha, weight_mode=self.weight_mode,
            eps_stop=self.eps_stop, stable_window=self.stable_window, max_steps=self.max_steps,
            seed=self.seed, precision=self.precision,
        )

    def with_delta(self, delta: float) -> ExperimentSpec:
        return ExperimentSpec(**{**asdict(self), "delta": delta})

    def parameters(self) -> dict:
        out = asdict(self)
        out.pop("workers")
        out["stability_times"] = list(self.stability_times)
        out["rho"] = self.rho
        return out


def load_graph(spec: ExperimentSpec) -> Graph:
    if spec.fixture is not None:
        return load_fixture(spec.fixture, spec.graph_path)
    with open(spec.graph_path) as fh:
        return load_edge_list(fh.read())


def run_seed(seed: int, r: int) -> np.random.SeedSequence:
    """Seed for run ``r``; depends only on the master seed and ``r``."""
    return np.random.SeedSequence(seed, spawn_key=(r,))


@dataclass
class _RunRecord:
    run: int
    stabilized: bool
    T_end: int
    key: str | None = None
    classes: tuple = ()
    mu2: tuple = ()
    agreement: bool = True
    problem1: bool = True
    envelope_violation: float = float("nan")
    max_rate: float = float("nan")
    rates_at_or_above_rho: int = 0
    exact_agents: int = 0
    spread: float = 0.0
    gap: float = float("inf")


def _one_run(g: Graph, spec: ExperimentSpec, r: int) -> _RunRecord:
    cfg = spec.config()
    x0 = sample_initial_opinions(g.n, run_seed(spec.seed, r))
    trace = simulate(g, x0, cfg)
    if not trace.stabilized:
        return _RunRecord(run=r, stabilized=False, T_end=trace.T_end)
    res = extract(g, trace, cfg, spec.delta)
    # the mu2 > delta guarantee is specific to the degree-averaging rule
    if spec.weight_mode == "degree_average" and res.agreement_flag and not res.problem1_satisfied:
        raise ConnectivityViolation(
            f"run {r}: class with mu2 <= delta={spec.delta} (min mu2 {res.min_mu2})"
        )
    rates = estimate_convergence_rate(trace)
    finite = rates[np.isfinite(rates)]
    return _RunRecord(
        run=r,
        stabilized=True,
        T_end=trace.T_end,
        key=res.partition.canonical_key,
        classes=res.partition.classes,
        mu2=res.mu2_per_class,
        agreement=res.agreement_flag,
        problem1=res.problem1_satisfied,
        envelope_violation=check_convergence_bound(trace),
        max_rate=float(finite.max()) if finite.size else float("nan"),
        rates_at_or_above_rho=int(np.sum(finite >= cfg.rho)),
        exact_agents=int(np.sum(~np.isfinite(rates))),
        spread=res.max_spread,
        gap=res.min_gap,
    )


def _run_chunk(args):
    g, spec, runs = args
    return [_one_run(g, spec, r) for r in runs]


@dataclass
class PartitionStats:
    partition: Partition
    occurrences: int
    agreements: int
    min_mu2: float | None
    modularity: float | None
    problem1_satisfied: bool
    stability: tuple[float, ...] | None = None

    @property
    def class_count(self) -> int:
        return len(self.partition)

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.occurrences


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    graph: Graph
    partitions: list[PartitionStats]
    not_stabilized: int
    T_end: list[int]
    envelope_violation: float | None
    rate_check: dict
    mismatches: list[dict] = field(default_factory=list)

    @property
    def runs(self) -> int:
        return self.spec.runs

    @property
    def modal(self) -> PartitionStats | None:
        return self.partitions[0] if self.partitions else None

    def modal_fraction(self) -> float:
        return self.modal.occurrences / self.runs if self.modal else 0.0

    def to_dict(self) -> dict:
        labels = self.graph.labels
        fx = FIXTURES.get(self.spec.fixture) if self.spec.fixture else None
        rows = []
        for ps in self.partitions:
            rows.append({
                "classes": [[labels[i] for i in c] for c in ps.partition.classes],
                "class_count": ps.class_count,
                "class_sizes": ps.partition.sizes(),
                "occurrences": ps.occurrences,
                "min_mu2": ps.min_mu2,
                "modularity": ps.modularity,
                "problem1_satisfied": ps.problem1_satisfied,
                "agreement_rate": ps.agreement_rate,
                "stability": list(ps.stability) if ps.stability is not None else None,
            })
        t_end = np.array(self.T_end) if self.T_end else np.array([0])
        return {
            "schema_version": SCHEMA_VERSION,
            "parameters": self.spec.parameters(),
            "graph": {
                "n": self.graph.n,
                "edges": self.graph.num_edges,
                "preprocessing": fx.note if fx else "edge list as given; duplicates collapsed",
            },
            "runs": self.runs,
            "not_stabilized": self.not_stabilized,
            "distinct_partitions": len(self.partitions),
            "partitions": rows,
            "T_end": {"min": int(t_end.min()), "max": int(t_end.max()), "mean": float(t_end.mean())},
            "envelope_max_violation": self.envelope_violation,
            "rate_check": self.rate_check,
            "route_mismatches": self.mismatches,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _aggregate(g: Graph, spec: ExperimentSpec, records: list[_RunRecord]) -> ExperimentReport:
    records = sorted(records, key=lambda rec: rec.run)
    grouped: dict[str, list[_RunRecord]] = {}
    for rec in records:
        if rec.stabilized:
            grouped.setdefault(rec.key, []).append(rec)
    stable = [rec for rec in records if rec.stabilized]
    isolated = bool(np.any(g.degrees == 0))
    stats = []
    for key, recs in grouped.items():
        part = Partition(recs[0].classes, g.n)
        mus = [m for m in recs[0].mu2 if m is not None]
        q = modularity(g, part) if g.num_edges else None
        curve = None
        if spec.stability_times and not isolated:
            curve = stability(g, part, spec.stability_times).values
        stats.append(PartitionStats(
            partition=part,
            occurrences=len(recs),
            agreements=sum(rec.agreement for rec in recs),
            min_mu2=min(mus) if mus else None,
            modularity=q,
            problem1_satisfied=all(rec.problem1 for rec in recs),
            stability=curve,
        ))
    stats.sort(key=lambda ps: (-ps.occurrences, ps.partition.canonical_key))

    max_rates = [rec.max_rate for rec in stable if np.isfinite(rec.max_rate)]
    rate_check = {
        "max_rate": max(max_rates) if max_rates else None,
        "rho": spec.rho,
        "agents_at_or_above_rho": int(sum(rec.rates_at_or_above_rho for rec in stable)),
        "exact_agents": int(sum(rec.exact_agents for rec in stable)),
        "holds": all(rec.rates_at_or_above_rho == 0 for rec in stable),
    }
    mismatches = [
        {"run": rec.run, "max_spread": rec.spread, "min_gap": rec.gap}
        for rec in stable if not rec.agreement
    ]
    env = [rec.envelope_violation for rec in stable]
    return ExperimentReport(
        spec=spec,
        graph=g,
        partitions=stats,
        not_stabilized=sum(not rec.stabilized for rec in records),
        T_end=[rec.T_end for rec in records],
        envelope_violation=max(env) if env else None,
        rate_check=rate_check,
        mismatches=mismatches,
    )


def run_experiment(spec: ExperimentSpec, graph: Graph | None = None) -> ExperimentReport:
    """Simulate ``spec.runs`` random starts and aggregate the partitions found.

    ``graph`` overrides loading from ``spec``. With ``spec.workers > 1`` runs
    are spread over a process pool; the report does not depend on it.
    """
    g = graph if graph is not None else load_graph(spec)
    if spec.workers > 1:
        chunks = [range(w, spec.runs, spec.workers) for w in range(spec.workers)]
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = [rec for part in pool.map(_run_chunk, [(g, spec, c) for c in chunks]) for rec in part]
    else:
        records = [_one_run(g, spec, r) for r in range(spec.runs)]
    report = _aggregate(g, spec, records)
    for m in report.mismatches:
        log.warning("run %d: extraction routes disagree (spread %.3g, gap %.3g)",
                    m["run"], m["max_spread"], m["min_gap"])
    return report


def delta_sweep(spec: ExperimentSpec, deltas, graph: Graph | None = None) -> list[ExperimentReport]:
    """One report per delta, all sharing the master seed."""
    g = graph if graph is not None else load_graph(spec)
    for d in deltas:
        if not 0 < d <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {d}")
    return [run_experiment(spec.with_delta(d), g) for d in deltas]


def sweep_summary(reports: list[ExperimentReport]) -> list[dict]:
    """Rows of (delta, modal class count, modal modularity, modal fraction)."""
    rows = []
    for rep in reports:
        m = rep.modal
        rows.append({
            "delta": rep.spec.delta,
            "modal_classes": m.class_count if m else None,
            "modal_modularity": m.modularity if m else None,
            "modal_fraction": rep.modal_fraction(),
        })
    return rows


CSV_COLUMNS = ["delta", "classes", "occurrences", "min_mu2", "modularity", "problem1"]


def _csv_rows(report: ExperimentReport):
    for ps in report.partitions:
        yield [report.spec.delta, ps.class_count, ps.occurrences, ps.min_mu2, ps.modularity,
               ps.problem1_satisfied]


def emit_report(report: ExperimentReport | list[ExperimentReport], format: str = "json") -> bytes:
    """Serialize one report (or a sweep) as JSON, CSV or DOT."""
    reports = report if isinstance(report, list) else [report]
    if format == "json":
        if isinstance(report, list):
            doc = {
                "schema_version": SCHEMA_VERSION,
                "summary": sweep_summary(reports),
                "reports": [r.to_dict() for r in reports],
            }
            return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
        return report.to_json().encode()
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rep in reports:
            w.writerows(_csv_rows(rep))
        return buf.getvalue().encode()
    if format == "dot":
        parts = []
        for rep in reports:
            name = "delta_" + repr(rep.spec.delta).replace(".", "_")
            parts.append(to_dot(rep.graph, rep.modal.partition if rep.modal else None, name=name))
        return "".join(parts).encode()
    raise ValueError(f"unknown format {format!r}; use json, csv or dot")
