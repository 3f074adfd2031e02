import numpy as np
import pytest
import scipy.linalg as la
import scipy.sparse as sp

from signedgraphpy.eval_bound import eval_bound
from signedgraphpy.exceptions import InvalidParameterError
from signedgraphpy.graph import SignedGraph
from signedgraphpy.laplacian import build_laplacian
from signedgraphpy.perturbation import *
from signedgraphpy.spectral import dense_sym_eig, gershgorin_lower_bound, simple_lower_bound


def test_min_norm_keeps_psd_input():
    L = build_laplacian(SignedGraph(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5)])).L
    result = min_norm_perturbation(L)
    assert result.method is PerturbationMethod.MIN_NORM
    assert np.all(result.tau == 0.0)
    assert np.allclose(result.perturbed, L.toarray())


def test_min_norm_diagonal_clamp():
    result = min_norm_perturbation(np.diag([-2.0, 3.0]))
    assert result.perturbed == pytest.approx(np.diag([0.0, 3.0]))
    assert np.linalg.norm(result.delta, 'fro') == pytest.approx(2.0)


def test_min_norm_random_signed_graphs(random_signed_graph):
    for seed in range(100):
        L = build_laplacian(random_signed_graph(20, seed, negative_fraction=0.2)).L.toarray()
        eigenvalues, V = la.eigh(L)
        result = min_norm_perturbation(L)
        clamped = np.maximum(eigenvalues, 0.0)
        assert la.eigvalsh(result.perturbed)[0] >= -1e-8
        # L's eigenvectors diagonalize the perturbed matrix
        assert np.max(np.abs(result.perturbed @ V - V * clamped)) <= 1e-8
        p = int(np.sum(eigenvalues < -1e-10))
        assert la.eigvalsh(result.perturbed)[:p + 1] == pytest.approx(np.zeros(p + 1), abs=1e-8)


def test_min_norm_beats_every_psd_candidate(random_signed_graph):
    rng = np.random.default_rng(12)
    for seed in range(5):
        L = build_laplacian(random_signed_graph(15, seed, negative_fraction=0.2)).L.toarray()
        eigenvalues = la.eigvalsh(L)
        smallest = np.linalg.norm(min_norm_perturbation(L).delta, 'fro')
        # corrections diagonal in L's eigenbasis that still make L + Delta PSD
        taus = -eigenvalues + rng.exponential(rng.uniform(0.01, 1.0), size=(1000, 15))
        assert np.all(eigenvalues + taus >= 0)
        assert np.all(np.linalg.norm(taus, axis=1) >= smallest - 1e-9)
        for _ in range(20):
            target = L + rng.uniform(0.0, 2.0) * rng.standard_normal((15, 15))
            w, U = la.eigh(0.5 * (target + target.T))
            psd = (U * np.maximum(w, 0.0)) @ U.T
            assert np.linalg.norm(psd - L, 'fro') >= smallest - 1e-9


def test_identity_shift_zero_bound():
    L = build_laplacian(SignedGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])).L
    result = perturb_identity(L, 0.0)
    assert result.eta == 0.0
    assert sp.issparse(result.perturbed)
    assert abs(result.perturbed - L).max() == 0.0


def test_identity_shift_to_zero(ten_node_centroid_graph):
    L = build_laplacian(ten_node_centroid_graph).L
    result = perturb_identity(L, -0.8)
    assert result.eta == pytest.approx(0.8)
    assert dense_sym_eig(result.perturbed).min_eigenvalue == pytest.approx(0.0, abs=1e-8)


def test_identity_shift_moves_whole_spectrum(random_signed_graph):
    for seed in range(100):
        L = build_laplacian(random_signed_graph(30, seed, negative_fraction=0.1)).L
        bound = eval_bound(L, 6, seed=seed, margin='lookahead')
        result = perturb_identity(L, bound)
        before = la.eigvalsh(L.toarray())
        after = la.eigvalsh(result.perturbed.toarray())
        assert after[0] >= -1e-8
        assert np.max(np.abs(after - before - result.eta)) <= 1e-8


def test_lower_bound_sources(ten_node_boundary_graph):
    bundle = build_laplacian(ten_node_boundary_graph)
    oracle = dense_sym_eig(bundle.L).min_eigenvalue
    assert lower_bound(bundle, 'oracle') == pytest.approx(oracle)
    assert lower_bound(bundle, 'simple') == simple_lower_bound(bundle)
    assert lower_bound(bundle, 'gershgorin') == min(gershgorin_lower_bound(bundle.L), 0.0)
    assert lower_bound(bundle, 'eval_bound', block_size=3, seed=2) == eval_bound(bundle.L, 3, seed=2, margin='lookahead')
    for source in ('oracle', 'simple', 'gershgorin', 'eval_bound'):
        assert lower_bound(bundle, source) <= oracle + 1e-9
    with pytest.raises(InvalidParameterError):
        lower_bound(bundle, 'psychic')


if __name__ == "__main__":
    pytest.main()
