from itertools import combinations

import numpy as np
import pytest
from hypothesis import strategies as st

from concavesep.graphs import Graph


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    all_pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(all_pairs), max_size=len(all_pairs)))
    return Graph(n, [e for e, keep in zip(all_pairs, mask) if keep])


@st.composite
def set_partitions(draw, min_n=2, max_n=6):
    n = draw(st.integers(min_n, max_n))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    blocks = {}
    for v, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(v)
    return n, sorted(blocks.values())


def gram_point(n, dim, seed):
    """Random point of P from unit vectors."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    z = 1.0 - v @ v.T
    np.fill_diagonal(z, 0.0)
    return np.clip(z, 0.0, 2.0)


@pytest.fixture
def p3():
    return Graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def k4():
    return Graph.complete(4)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULT_LINES
    except ImportError:
        return
    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULT_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
