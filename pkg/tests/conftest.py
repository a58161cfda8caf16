import numpy as np
import pytest

from discgeom import GraphSpace


def path_graph(n, weight=1.0, mu=None):
    w = np.zeros((n, n))
    for i in range(n - 1):
        w[i, i + 1] = w[i + 1, i] = weight
    return GraphSpace(np.ones(n) if mu is None else np.asarray(mu, float), w)


def complete_graph(n, weight=1.0, mu=None):
    w = np.full((n, n), weight)
    np.fill_diagonal(w, 0.0)
    return GraphSpace(np.ones(n) if mu is None else np.asarray(mu, float), w)


def star_graph(leaves, weight=1.0):
    n = leaves + 1
    w = np.zeros((n, n))
    w[0, 1:] = w[1:, 0] = weight
    return GraphSpace(np.ones(n), w)


def random_connected_graph(rng, n, extra_edge_prob=0.4, random_measure=True):
    """Random spanning tree plus extra edges; weights and measures in [0.5, 2]."""
    w = np.zeros((n, n))
    for i in range(1, n):
        j = int(rng.integers(0, i))
        w[i, j] = w[j, i] = rng.uniform(0.5, 2.0)
    for i in range(n):
        for j in range(i + 1, n):
            if w[i, j] == 0.0 and rng.random() < extra_edge_prob:
                w[i, j] = w[j, i] = rng.uniform(0.5, 2.0)
    mu = rng.uniform(0.5, 2.0, size=n) if random_measure else np.ones(n)
    return GraphSpace(mu, w)


def two_clique_graph(size=6, bridge_weight=1e-3):
    """Two tightly knit blocks joined by one weak edge."""
    n = 2 * size
    w = np.zeros((n, n))
    for block in (range(size), range(size, n)):
        for i in block:
            for j in block:
                if i < j:
                    w[i, j] = w[j, i] = 1.0
    w[size - 1, size] = w[size, size - 1] = bridge_weight
    return GraphSpace(np.ones(n), w)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def p3():
    return path_graph(3)
