import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from indturan.graph_core import BipartiteGraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def bipartite_graphs(draw, max_a=6, max_b=6, min_a=0, min_b=0):
    n_a = draw(st.integers(min_a, max_a))
    n_b = draw(st.integers(min_b, max_b))
    rows = tuple(draw(st.integers(0, (1 << n_b) - 1)) for _ in range(n_a))
    return BipartiteGraph(n_a, n_b, rows)


def random_graph(rng: random.Random, n_a, n_b, p):
    return BipartiteGraph.from_edges(n_a, n_b, [(a, b) for a in range(n_a) for b in range(n_b) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES = {}


class _Criterion:
    def __init__(self, key, title):
        self.key, self.title, self.detail = key, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        extra = self.detail if exc_type is None else f"{self.detail} [{exc_type.__name__}: {exc}]"
        ACCEPTANCE_LINES[self.key] = f"{self.key} {status}: {self.title}" + (f" -- {extra}" if extra else "")
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[2:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
