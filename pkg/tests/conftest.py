from __future__ import annotations

import pytest

import helpers
from recjustify.axioms import fixture_graph
from recjustify.graph import Query


@pytest.fixture(scope="session")
def movies():
    return helpers.movie_graph()


@pytest.fixture(scope="session")
def movie_query():
    return Query(r="avatar", feedback=frozenset({"aliens", "terminator"}), budget=3)


@pytest.fixture(scope="session")
def axiom_graphs():
    return {stem: fixture_graph(stem) for stem in helpers.AXIOM_STEMS}
