import numpy as np
import pytest
import scipy.sparse as sp

from signedgraphpy.eval_bound import *
from signedgraphpy.exceptions import InvalidParameterError, NonSymmetricMatrixError, NumericalBreakdownError
from signedgraphpy.graph import SignedGraph
from signedgraphpy.laplacian import build_laplacian
from signedgraphpy.spectral import dense_sym_eig


def test_bfs_block_path_order():
    W = SignedGraph(6, [(i, i + 1, 1.0) for i in range(5)]).weight_matrix()
    assert bfs_block(W, 3, 0).tolist() == [0, 1, 2]
    assert bfs_block(W, 3, 3).tolist() == [3, 2, 4]
    assert bfs_block(W.toarray(), 3, 3).tolist() == [3, 2, 4]


def test_bfs_block_restarts_on_lowest_undiscovered():
    W = SignedGraph(6, [(0, 1, 1.0), (3, 4, 1.0), (4, 5, 1.0)]).weight_matrix()
    assert bfs_block(W, 4, 1).tolist() == [1, 0, 2, 3]


def test_unit_positive_graph_gives_zero():
    rng = np.random.default_rng(0)
    pairs = {(i, i + 1) for i in range(59)} | {tuple(sorted(rng.choice(60, 2, replace=False).tolist())) for _ in range(60)}
    L = build_laplacian(SignedGraph(60, [(i, j, 1.0) for i, j in pairs])).L
    trace = []
    assert eval_bound(L, 8, seed=1, trace=trace) == pytest.approx(0.0, abs=1e-9)
    assert all(level.kappa == 0.0 for level in trace)


def test_small_matrix_uses_exact_eigenvalue(line_graph):
    L = build_laplacian(line_graph(1.0)).L
    oracle = dense_sym_eig(L).min_eigenvalue
    assert eval_bound(L, 3) == pytest.approx(oracle)
    assert eval_bound(np.eye(3), 5) == 0.0


@pytest.mark.parametrize('r', [2, 3, 4, 5])
def test_ten_node_examples(ten_node_centroid_graph, ten_node_boundary_graph, r):
    for graph, reported in ((ten_node_centroid_graph, -0.8), (ten_node_boundary_graph, -2.0)):
        L = build_laplacian(graph).L
        oracle = dense_sym_eig(L).min_eigenvalue
        assert oracle == pytest.approx(reported, abs=0.05)
        assert eval_bound(L, r, seed=r) <= oracle + 1e-9


@pytest.mark.parametrize('margin', ['fixed', 'lookahead'])
def test_bound_is_sound(random_signed_graph, margin):
    for seed in range(20):
        n = 50 + 7 * seed
        L = build_laplacian(random_signed_graph(n, seed)).L
        oracle = dense_sym_eig(L).min_eigenvalue
        for r in (10, int(np.ceil(np.sqrt(n)))):
            try:
                bound = eval_bound(L, r, seed=seed, margin=margin)
            except NumericalBreakdownError:
                # only the fixed margin can overflow
                assert margin == 'fixed'
                continue
            assert bound <= oracle + 1e-9 * max(1.0, abs(oracle))


def test_shifted_spectrum_keeps_exact_pivot():
    eigenvalues = np.array([-1.7e16, -1.7e16 + 4.0, 3.0])
    pivots = shifted_spectrum(eigenvalues, 1e-6)
    assert pivots[0] == 1e-6
    assert pivots[1] == pytest.approx(4.0 + 1e-6)
    assert eigenvalues[0] - (eigenvalues[0] - 1e-6) == 0.0


def test_fixed_margin_on_huge_negative_diagonal():
    path = build_laplacian(SignedGraph(12, [(i, i + 1, 1.0) for i in range(11)])).L.toarray()
    L = path - 1.7e16 * np.eye(12)
    oracle = dense_sym_eig(L).min_eigenvalue
    trace = []
    bound = eval_bound(L, 3, seed=2, margin='fixed', trace=trace)
    assert np.isfinite(bound)
    assert bound <= oracle + 1e-9 * abs(oracle)
    assert trace[0].margin == 1e-6
    assert all(level.margin in (0.0, 1e-6) for level in trace)


def test_fixed_margin_overflow_raises(random_symmetric):
    with pytest.raises(NumericalBreakdownError):
        eval_bound(random_symmetric(40, 3), 5, epsilon=1e-200, margin='fixed')


def test_lookahead_keeps_next_boundary_block_psd(random_symmetric):
    rng = np.random.default_rng(6)
    for seed in range(20):
        A = random_symmetric(14, seed)
        eigenvalues, V = np.linalg.eigh(A[:6, :6])
        W = V.T @ A[:6, 6:]
        A22 = A[6:, 6:]
        delta = lookahead_margin(eigenvalues, W, A22, 1e-6)
        assert delta >= 1e-6

        def smallest(d):
            S = A22 + (d - eigenvalues[0]) * np.eye(8) - W.T @ (W / (eigenvalues - eigenvalues[0] + d)[:, None])
            return np.linalg.eigvalsh(0.5 * (S + S.T))[0]

        assert smallest(delta) >= -1e-9
        if delta > 1e-6:
            assert smallest(delta * (1.0 - 3e-4)) < 0.0
        assert lookahead_margin(eigenvalues, W[:, :0], A22[:0, :0], 0.25) == 0.25
        shifted = rng.uniform(10.0, 20.0)
        assert lookahead_margin(eigenvalues, W, A22 + shifted * np.eye(8), 1e-6) <= delta


def test_lookahead_on_positive_graph_does_not_shift():
    rng = np.random.default_rng(0)
    pairs = {(i, i + 1) for i in range(59)} | {tuple(sorted(rng.choice(60, 2, replace=False).tolist())) for _ in range(60)}
    L = build_laplacian(SignedGraph(60, [(i, j, 1.0) for i, j in pairs])).L
    trace = []
    assert eval_bound(L, 8, seed=1, margin='lookahead', trace=trace) == pytest.approx(0.0, abs=1e-9)
    assert all(level.kappa == 0.0 for level in trace)


def test_trace_levels(random_signed_graph):
    L = build_laplacian(random_signed_graph(100, 4)).L
    trace = []
    eval_bound(L, 10, margin='lookahead', trace=trace)
    assert 1 <= len(trace) <= 10
    assert [level.level for level in trace] == list(range(len(trace)))
    assert all(len(level.block) == 10 for level in trace)
    assert trace[0].dimension == 100
    assert all(b.dimension == a.dimension - 10 for a, b in zip(trace, trace[1:]))
    for level in trace:
        assert level.kappa <= 0.0
        if level.kappa < 0.0:
            assert level.margin > 0.0
            assert level.kappa == pytest.approx(level.lambda1 - level.margin)
            assert level.kappa < level.lambda1


def test_seed_determinism(random_signed_graph):
    L = build_laplacian(random_signed_graph(80, 9)).L
    assert eval_bound(L, 9, seed=3, margin='lookahead') == eval_bound(L, 9, seed=3, margin='lookahead')
    lookahead = eval_bound(L, 9, seed=3, margin='lookahead')
    # bisection steps near the root may land differently on dense and sparse input
    assert lookahead == pytest.approx(eval_bound(L.toarray(), 9, seed=3, margin='lookahead'), rel=1e-3, abs=1e-8)


def test_invalid_arguments(line_graph):
    L = build_laplacian(line_graph(1.0)).L
    with pytest.raises(InvalidParameterError):
        eval_bound(L, 0)
    with pytest.raises(InvalidParameterError):
        eval_bound(L, 2, epsilon=0.0)
    with pytest.raises(InvalidParameterError):
        eval_bound(L, 2, margin='loose')
    with pytest.raises(NonSymmetricMatrixError):
        eval_bound(sp.csr_matrix(np.triu(np.ones((4, 4)))), 2)


if __name__ == "__main__":
    pytest.main()
