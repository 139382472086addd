import numpy as np
import pytest
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from jigsawperc.graph import DoubleGraph

ACCEPTANCE_LINES = []


def random_double_graph(rng, n, p1, p2):
    """Dense Bernoulli sampler, independent of the library's generator."""
    iu, ju = np.triu_indices(n, 1)
    mask_r = rng.random(iu.size) < p1
    mask_b = rng.random(iu.size) < p2
    red = np.stack([iu[mask_r] + 1, ju[mask_r] + 1], axis=1)
    blue = np.stack([iu[mask_b] + 1, ju[mask_b] + 1], axis=1)
    return DoubleGraph(n, red, blue)


def is_connected(n, edges):
    if n <= 1:
        return True
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    adj = coo_matrix((np.ones(len(edges)), (edges[:, 0] - 1, edges[:, 1] - 1)), shape=(n, n))
    return connected_components(adj, directed=False)[0] == 1


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def _criterion_number(line):
    return int(line.split("criterion")[1].split(":")[0])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_criterion_number):
            terminalreporter.write_line(line)
