from functools import lru_cache

import pytest

from pcubed.lhs_morita import build_orbit_indices, morita_components


@lru_cache(maxsize=None)
def _indices(p):
    return build_orbit_indices(p)


@lru_cache(maxsize=None)
def _graph(p):
    return morita_components(p, indices=_indices(p))


@pytest.fixture(scope="session")
def indices_for():
    """Cached per-prime orbit indices for all five families."""
    return _indices


@pytest.fixture(scope="session")
def graph_for():
    """Cached per-prime Morita graphs."""
    return _graph
