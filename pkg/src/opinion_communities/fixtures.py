"""Named benchmark graphs.

``karate`` ships with the package. ``books`` (105 vertices) and ``blogs``
(1222 vertices) must be supplied as edge-list files, either by explicit path
or through the directory named by ``$OPINION_COMMUNITIES_DATA``
(files ``polbooks.txt`` and ``polblogs.txt``).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import Graph, load_edge_list

__all__ = ["DATA_ENV", "FIXTURES", "FixtureUnavailable", "fixture_path", "load_fixture"]

DATA_ENV = "OPINION_COMMUNITIES_DATA"


class FixtureUnavailable(FileNotFoundError):
    pass


@dataclass(frozen=True)
class _Fixture:
    filename: str
    n: int
    bundled: bool = False
    # hyperlink data is directed and has self-links
    symmetrize: bool = False
    note: str = ""


FIXTURES = {
    "karate": _Fixture("karate.txt", 34, bundled=True, note="Zachary karate club, 78 edges"),
    "books": _Fixture("polbooks.txt", 105, note="co-purchased political books"),
    "blogs": _Fixture(
        "polblogs.txt", 1222, symmetrize=True,
        note="political blogs; hyperlinks symmetrized, duplicates collapsed, self-links dropped",
    ),
}


def fixture_path(name: str) -> Path | None:
    """Where the named fixture would be read from, or None if not found."""
    fx = FIXTURES[name]
    if fx.bundled:
        return Path(str(resources.files(__package__).joinpath("data", fx.filename)))
    root = os.environ.get(DATA_ENV)
    if root and (Path(root) / fx.filename).is_file():
        return Path(root) / fx.filename
    return None


def load_fixture(name: str, path: str | os.PathLike | None = None) -> Graph:
    """Load a benchmark graph by name, checking its vertex count."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    fx = FIXTURES[name]
    path = Path(path) if path is not None else fixture_path(name)
    if path is None:
        raise FixtureUnavailable(
            f"fixture {name!r} is not bundled; pass a path or put {fx.filename} in ${DATA_ENV}"
        )
    g = load_edge_list(Path(path).read_text(), drop_self_loops=fx.symmetrize)
    if g.n != fx.n:
        raise ValueError(f"fixture {name!r} should have {fx.n} vertices, {path} has {g.n}")
    return g
