import json
import logging

import numpy as np
import pytest

from opinion_communities.community import (
    communities_from_interaction_graph,
    communities_from_opinions,
    default_tolerance,
    extract,
)
from opinion_communities.dynamics import NotStabilizedError, SimulationConfig, sample_initial_opinions, simulate
from opinion_communities.graph import Graph, Partition, connected_components, induced_subgraph

from .conftest import path_graph, random_connected_graph

K2 = Graph(2, [(0, 1)])


def cfg(delta=0.4, **kw):
    return SimulationConfig(rho=1 - 0.1 * delta, alpha=0.1, **kw)


class TestTwoAgents:
    def test_consensus(self):
        c = cfg(0.4)
        res = extract(K2, simulate(K2, (0.0, 0.5), c), c)
        assert res.partition == Partition([[0, 1]])
        assert res.mu2_per_class[0] == pytest.approx(2.0)
        assert res.problem1_satisfied and res.agreement_flag
        assert res.delta == pytest.approx(0.4)
        assert res.limit_opinions[0] == pytest.approx(0.25, abs=1e-12)

    def test_far_apart(self):
        c = cfg(0.4)
        res = extract(K2, simulate(K2, (0.0, 2.0), c), c)
        assert res.partition == Partition([[0], [1]])
        assert res.mu2_per_class == (None, None)
        assert res.min_mu2 is None
        assert res.problem1_satisfied

    def test_edgeless_vacuous(self):
        g = Graph(3)
        c = cfg()
        res = extract(g, simulate(g, (0.1, 0.2, 0.3), c), c)
        assert len(res.partition) == 3 and res.problem1_satisfied


class TestOpinionRoute:
    def test_tie_does_not_split(self):
        g = Graph(3)
        tr = simulate(g, (0.0, 0.25, 0.75), cfg())
        assert communities_from_opinions(tr, tolerance=0.25) == Partition([[0, 1], [2]])
        assert communities_from_opinions(tr, tolerance=0.2) == Partition([[0], [1], [2]])
        assert communities_from_opinions(tr, tolerance=0.5) == Partition([[0, 1, 2]])

    def test_unsorted_input(self):
        g = Graph(4)
        tr = simulate(g, (0.9, 0.1, 0.95, 0.12), cfg())
        assert communities_from_opinions(tr, tolerance=0.1) == Partition([[0, 2], [1, 3]])

    def test_default_tolerance_tiny(self):
        tr = simulate(K2, (0.0, 0.5), cfg())
        assert 0 < default_tolerance(tr) < 1e-12

    def test_not_stabilized(self):
        tr = simulate(K2, (0.0, 0.5), cfg(max_steps=5))
        with pytest.raises(NotStabilizedError):
            communities_from_opinions(tr)
        with pytest.raises(NotStabilizedError):
            communities_from_interaction_graph(K2, tr)

    def test_wrong_graph(self):
        tr = simulate(K2, (0.0, 0.5), cfg())
        with pytest.raises(ValueError):
            communities_from_interaction_graph(path_graph(3), tr)


class TestRandom:
    def test_routes_and_invariants(self, rng):
        for k in range(15):
            g = random_connected_graph(rng, int(rng.integers(3, 14)), extra_p=0.2)
            c = cfg(float(rng.uniform(0.1, 0.6)))
            tr = simulate(g, sample_initial_opinions(g.n, k), c)
            res = extract(g, tr, c)
            assert res.agreement_flag
            # every class is connected in G and the classes refine the components of G
            for cls in res.partition.classes:
                sub, _ = induced_subgraph(g, cls)
                assert len(connected_components(sub)) == 1
            assert res.partition.refines(connected_components(g))
            assert res.problem1_satisfied

    def test_disagreement_is_logged(self, caplog):
        tr = simulate(K2, (0.0, 0.5), cfg())
        with caplog.at_level(logging.WARNING):
            res = extract(K2, tr, tolerance=-1.0)
        assert not res.agreement_flag
        assert res.partition == Partition([[0, 1]])
        assert "disagree" in caplog.text


class TestKarate:
    def test_delta_02(self, karate):
        c = cfg(0.2)
        res = extract(karate, simulate(karate, sample_initial_opinions(34, 0), c), c)
        assert len(res.partition) == 2
        assert res.min_mu2 == pytest.approx(0.250, abs=5e-4)
        assert res.problem1_satisfied

    def test_json(self, karate):
        c = cfg(0.3)
        res = extract(karate, simulate(karate, sample_initial_opinions(34, 1), c), c)
        d = json.loads(res.to_json())
        members = sorted(v for cls in d["classes"] for v in cls["members"])
        assert members == list(range(1, 35))
        assert d["problem1_satisfied"] is True
        assert len(d["classes"]) == len(res.partition)
        assert np.isclose(d["delta"], 0.3)
