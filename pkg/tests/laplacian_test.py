import numpy as np
import pytest
import scipy.linalg as la
import scipy.sparse as sp

from signedgraphpy.exceptions import DimensionMismatchError, InvalidParameterError
from signedgraphpy.graph import SignedGraph
from signedgraphpy.laplacian import *
from signedgraphpy.priors import evaluate_prior


@pytest.mark.parametrize('w, expected', [
    (1.0, [[-1, 1, 0], [1, 0, -1], [0, -1, 1]]),
    (-1.0, [[-1, 1, 0], [1, -2, 1], [0, 1, -1]]),
])
def test_line_graph_laplacian(line_graph, w, expected):
    bundle = build_laplacian(line_graph(w))
    assert np.array_equal(bundle.L.toarray(), np.array(expected, dtype=float))


def test_signed_laplacian_form(line_graph):
    bundle = build_laplacian(line_graph(1.0))
    x = np.array([0.3, -1.2, 2.0])
    expected = (x[0] + x[1]) ** 2 + (x[1] - x[2]) ** 2
    assert evaluate_prior(x, bundle, 'signed_quadratic') == pytest.approx(expected)


def test_positive_triangle_spectrum():
    bundle = build_laplacian(SignedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]))
    assert la.eigvalsh(bundle.L.toarray()) == pytest.approx([0.0, 3.0, 3.0], abs=1e-12)
    assert not bundle.has_negative_edges


def test_bundle_invariants(random_signed_graph):
    for seed in range(20):
        bundle = build_laplacian(random_signed_graph(40, seed, negative_fraction=0.1))
        ones = np.ones(bundle.node_count)
        assert np.max(np.abs(bundle.L @ ones)) <= 1e-12
        assert abs(bundle.L - bundle.L_pos - bundle.L_neg).max() <= 1e-12
        assert la.eigvalsh(bundle.L_pos.toarray())[0] >= -1e-10
        assert la.eigvalsh(-bundle.L_neg.toarray())[0] >= -1e-10
        assert la.eigvalsh(bundle.L_signed.toarray())[0] >= -1e-10


def test_combine_endpoints(random_signed_graph):
    a = build_laplacian(random_signed_graph(10, 1)).L_pos
    b = build_laplacian(random_signed_graph(10, 2)).L_pos
    assert combine_laplacians(a, b, 1.0) is a
    assert combine_laplacians(a, b, 0.0) is b


def test_combine_stays_psd():
    rng = np.random.default_rng(0)
    A, B = rng.standard_normal((10, 10)), rng.standard_normal((10, 10))
    combined = combine_laplacians(A @ A.T, B @ B.T, 0.5)
    assert la.eigvalsh(combined)[0] >= -1e-10


def test_combine_mixed_inputs():
    dense = np.eye(3)
    sparse = sp.identity(3, format='csr') * 3.0
    combined = combine_laplacians(dense, sparse, 0.25)
    assert isinstance(combined, np.ndarray)
    assert np.allclose(combined, np.eye(3) * 2.5)
    assert sp.issparse(combine_laplacians(sparse, sparse, 0.5))


def test_combine_errors():
    with pytest.raises(DimensionMismatchError):
        combine_laplacians(np.eye(2), np.eye(3), 0.5)
    with pytest.raises(InvalidParameterError):
        combine_laplacians(np.eye(2), np.eye(2), 1.5)


if __name__ == "__main__":
    pytest.main()
