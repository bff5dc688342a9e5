import pytest

from superspecial.graph import build_graph

_GRAPHS = {}


@pytest.fixture(scope="session")
def graph_cache():
    """Session-wide cache of built graphs, keyed by prime."""

    def get(p, seed=0):
        key = (p, seed)
        if key not in _GRAPHS:
            _GRAPHS[key] = build_graph(p, seed=seed)
        return _GRAPHS[key]

    return get
