import numpy as np
import pytest

from signedgraphpy.features import FeatureSet, PartialLabels
from signedgraphpy.graph import SignedGraph


def _path_edges(nodes, weight=1.0):
    return [(a, b, weight) for a, b in zip(nodes, nodes[1:])]


@pytest.fixture
def line_graph():
    """The 3-node line graph 0 -(-1)- 1 -(w)- 2."""
    def build(w):
        return SignedGraph(3, [(0, 1, -1.0), (1, 2, w)])
    return build


@pytest.fixture
def ten_node_centroid_graph():
    # two 5-node paths, weak cross edges and one strong negative edge between the middles
    edges = _path_edges([0, 1, 2, 3, 4]) + _path_edges([5, 6, 7, 8, 9])
    edges += [(i, i + 5, -1.0 if i == 2 else 0.1) for i in range(5)]
    return SignedGraph(10, edges)


@pytest.fixture
def ten_node_boundary_graph():
    edges = _path_edges([0, 1, 2, 3, 4]) + _path_edges([5, 6, 7, 8, 9])
    edges += [(i, i + 5, -1.0) for i in range(5)]
    return SignedGraph(10, edges)


@pytest.fixture
def two_triangles():
    """Unit-weight triangles {0,1,2} (+1) and {3,4,5} (-1) joined by a 0.1 edge 2-3."""
    edges = [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0), (2, 3, 0.1)]
    truth = np.array([1, 1, 1, -1, -1, -1])
    return SignedGraph(6, edges), truth


@pytest.fixture
def random_signed_graph():
    """Factory for seeded random connected signed graphs with a given share of negative edges."""
    def build(n, seed, negative_fraction=0.05, extra_degree=4):
        rng = np.random.default_rng(seed)
        pairs = {(i, i + 1) for i in range(n - 1)}
        while len(pairs) < (n - 1) + n * extra_degree // 2:
            i, j = sorted(rng.choice(n, size=2, replace=False).tolist())
            pairs.add((i, j))
        pairs = sorted(pairs)
        weights = rng.uniform(0.5, 1.5, size=len(pairs))
        n_negative = max(1, int(round(negative_fraction * len(pairs))))
        negative = rng.choice(len(pairs), size=n_negative, replace=False)
        weights[negative] *= -1.0
        return SignedGraph(n, [(i, j, w) for (i, j), w in zip(pairs, weights)])
    return build


@pytest.fixture
def random_symmetric():
    def build(n, seed):
        A = np.random.default_rng(seed).standard_normal((n, n))
        return 0.5 * (A + A.T)
    return build


@pytest.fixture
def blobs():
    """Two 2-D Gaussian blobs of 20 points each, labels -1 then +1."""
    rng = np.random.default_rng(7)
    negative = rng.normal(loc=(0.0, 0.0), scale=0.5, size=(20, 2))
    positive = rng.normal(loc=(4.0, 0.0), scale=0.5, size=(20, 2))
    features = FeatureSet(np.vstack([negative, positive]))
    labels = np.array([-1] * 20 + [1] * 20)
    return features, labels


@pytest.fixture
def all_labeled():
    def build(labels):
        labels = np.asarray(labels)
        return PartialLabels(np.arange(labels.size), labels, labels.size)
    return build
