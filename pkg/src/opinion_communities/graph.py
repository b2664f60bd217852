"""Undirected simple graphs, vertex partitions and edge-list I/O.

A :class:`Graph` keeps its edges as an ``(m, 2)`` integer array with
``i < j`` on every row, sorted lexicographically. External vertex labels
(ints or strings) map onto contiguous indices ``0..n-1``.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

__all__ = [
    "EdgeListError",
    "Graph",
    "Partition",
    "connected_components",
    "induced_subgraph",
    "load_edge_list",
    "partition_spanning_subgraph",
    "to_dot",
]


class EdgeListError(ValueError):
    """Malformed edge-list text; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _normalize_edges(n: int, edges) -> np.ndarray:
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    arr = arr.reshape(-1, 2)
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError(f"edge endpoint out of range for n={n}")
    if np.any(arr[:, 0] == arr[:, 1]):
        i = int(arr[arr[:, 0] == arr[:, 1]][0, 0])
        raise ValueError(f"self-loop at vertex {i}")
    arr = np.sort(arr, axis=1)
    return np.unique(arr, axis=0)


class Graph:
    """Immutable undirected simple graph.

    Parameters
    ----------
    n : int
        Number of vertices (at least 1).
    edges : iterable of pairs
        Unordered index pairs. Duplicates are collapsed, self-loops rejected.
    labels : sequence, optional
        External label of every vertex, defaults to ``range(n)``.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence[Hashable] | None = None):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        self._n = int(n)
        self._edges = _normalize_edges(self._n, edges)
        self._edges.setflags(write=False)
        if labels is None:
            labels = range(self._n)
        labels = tuple(labels)
        if len(labels) != self._n or len(set(labels)) != self._n:
            raise ValueError("labels must be n distinct values")
        self._labels = labels

    @property
    def n(self) -> int:
        return self._n

    @property
    def edge_array(self) -> np.ndarray:
        """Read-only ``(m, 2)`` array of index pairs with ``i < j``."""
        return self._edges

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(map(tuple, self._edges.tolist()))

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def labels(self) -> tuple:
        return self._labels

    @cached_property
    def index_of(self) -> dict:
        return {lab: i for i, lab in enumerate(self._labels)}

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.bincount(self._edges.ravel(), minlength=self._n)
        d.setflags(write=False)
        return d

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix (float64)."""
        a = np.zeros((self._n, self._n))
        a[self._edges[:, 0], self._edges[:, 1]] = 1.0
        a[self._edges[:, 1], self._edges[:, 0]] = 1.0
        a.setflags(write=False)
        return a

    def neighbors(self, i: int) -> set[int]:
        e = self._edges
        return set(e[e[:, 0] == i, 1].tolist()) | set(e[e[:, 1] == i, 0].tolist())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self._n, self._edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.num_edges})"


class Partition:
    """Disjoint exact cover of ``range(n)``.

    Classes are stored canonically: members ascending, classes ordered by
    their smallest member, so equal contents give equal ``canonical_key``.
    """

    __slots__ = ("_classes", "_n", "_key")

    def __init__(self, classes: Iterable[Iterable[int]], n: int | None = None):
        cls = [tuple(sorted(int(v) for v in c)) for c in classes]
        if any(len(c) == 0 for c in cls):
            raise ValueError("partition classes must be non-empty")
        members = [v for c in cls for v in c]
        if len(members) != len(set(members)):
            raise ValueError("partition classes overlap")
        if n is None:
            n = len(members)
        if sorted(members) != list(range(n)):
            raise ValueError(f"classes do not cover exactly the vertices 0..{n - 1}")
        cls.sort(key=lambda c: c[0])
        self._classes = tuple(cls)
        self._n = n
        self._key = "|".join(",".join(map(str, c)) for c in self._classes)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> Partition:
        """Build from a membership vector (``labels[i]`` = class id of vertex i)."""
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(i)
        return cls(groups.values(), len(labels))

    @property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        return self._classes

    @property
    def n(self) -> int:
        return self._n

    @property
    def canonical_key(self) -> str:
        return self._key

    def membership(self) -> np.ndarray:
        out = np.empty(self._n, dtype=np.int64)
        for k, c in enumerate(self._classes):
            out[list(c)] = k
        return out

    def refines(self, other: Partition) -> bool:
        """True if every class of ``self`` lies inside a class of ``other``."""
        owner = other.membership()
        return all(len(set(owner[list(c)].tolist())) == 1 for c in self._classes)

    def sizes(self) -> list[int]:
        return [len(c) for c in self._classes]

    def __len__(self):
        return len(self._classes)

    def __iter__(self):
        return iter(self._classes)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Partition({[set(c) for c in self._classes]})"


def load_edge_list(text: str, *, drop_self_loops: bool = False) -> Graph:
    """Parse whitespace-separated vertex pairs, one per line.

    Blank lines and lines starting with ``#`` are skipped. Labels are
    integers when every token is a non-negative integer, strings otherwise,
    and get internal indices in order of first appearance.
    """
    rows: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(f"expected 2 vertex labels, got {len(tokens)}", lineno)
        rows.append((lineno, tokens[0], tokens[1]))

    all_int = all(a.isdigit() and b.isdigit() for _, a, b in rows)
    index: dict = {}
    edges = []
    for lineno, a, b in rows:
        ka, kb = (int(a), int(b)) if all_int else (a, b)
        if ka == kb:
            if drop_self_loops:
                continue
            raise EdgeListError(f"self-loop on vertex {a!r}", lineno)
        ia = index.setdefault(ka, len(index))
        ib = index.setdefault(kb, len(index))
        edges.append((ia, ib))
    if not index:
        raise EdgeListError("no edges found", 0)
    return Graph(len(index), edges, labels=list(index))


def connected_components(g: Graph) -> Partition:
    """Connected components; isolated vertices become singleton classes."""
    e = g.edge_array
    adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    _, lab = _cc(adj, directed=False)
    return Partition.from_labels(lab)


def induced_subgraph(g: Graph, vertex_set: Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Subgraph on ``vertex_set`` keeping only internal edges.

    Returns the subgraph and the array mapping its indices back to ``g``'s.
    """
    verts = np.array(sorted(set(int(v) for v in vertex_set)), dtype=np.int64)
    if verts.size == 0:
        raise ValueError("vertex set is empty")
    if verts[0] < 0 or verts[-1] >= g.n:
        raise ValueError("vertex index out of range")
    local = np.full(g.n, -1, dtype=np.int64)
    local[verts] = np.arange(verts.size)
    e = g.edge_array
    keep = (local[e[:, 0]] >= 0) & (local[e[:, 1]] >= 0)
    sub = Graph(verts.size, local[e[keep]], labels=[g.labels[v] for v in verts])
    return sub, verts


def partition_spanning_subgraph(g: Graph, p: Partition) -> Graph:
    """Same vertices as ``g``, keeping only edges inside a class of ``p``."""
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, graph has {g.n}")
    owner = p.membership()
    e = g.edge_array
    return Graph(g.n, e[owner[e[:, 0]] == owner[e[:, 1]]], labels=g.labels)


def to_dot(g: Graph, partition: Partition | None = None, *, name: str = "G", dash_inter: bool = True) -> str:
    """Graphviz DOT text. With a partition, nodes carry a ``colorscheme``
    index per class and edges across classes are dashed."""
    owner = partition.membership() if partition is not None else None
    out = [f"graph {name} {{"]
    for i, lab in enumerate(g.labels):
        attrs = [f'label="{lab}"']
        if owner is not None:
            k = int(owner[i])
            attrs += [f"group={k}", "colorscheme=set312", f"color={k % 12 + 1}", "style=filled", f"fillcolor={k % 12 + 1}"]
        out.append(f"  {i} [{', '.join(attrs)}];")
    for i, j in g.edge_array.tolist():
        if owner is not None and dash_inter and owner[i] != owner[j]:
            out.append(f"  {i} -- {j} [style=dashed];")
        else:
            out.append(f"  {i} -- {j};")
    out.append("}")
    return "\n".join(out) + "\n"
