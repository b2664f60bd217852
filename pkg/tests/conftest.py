import itertools

import numpy as np
import pytest

from opinion_communities.fixtures import load_fixture
from opinion_communities.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def karate():
    return load_fixture("karate")


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Graph(n, itertools.combinations(range(n), 2))


def random_connected_graph(rng, n, extra_p=0.3):
    """Random spanning tree plus independent extra edges."""
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[k]), int(order[rng.integers(k)])))) for k in range(1, n)}
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < extra_p:
            edges.add((i, j))
    return Graph(n, sorted(edges))


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [p for k, p in enumerate(pairs) if mask >> k & 1])


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        for k in range(len(sub)):
            yield sub[:k] + [[first] + sub[k]] + sub[k + 1:]
        yield [[first]] + sub


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
