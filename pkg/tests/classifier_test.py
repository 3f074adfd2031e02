import numpy as np
import pytest
import scipy.linalg as la

from signedgraphpy.classifier import *
from signedgraphpy.exceptions import InvalidParameterError, DimensionMismatchError
from signedgraphpy.features import PartialLabels
from signedgraphpy.graph import GraphConfig
from signedgraphpy.solver import SolverConfig, irls_solve


@pytest.fixture
def split(blobs):
    features, truth = blobs
    rng = np.random.default_rng(4)
    train = np.sort(rng.choice(40, size=28, replace=False))
    test = np.setdiff1d(np.arange(40), train)
    return features, truth, PartialLabels(train, truth[train], 40), test


def test_method_parse():
    assert Method.parse('ProposedHybrid') is Method.PROPOSED_HYBRID
    assert Method.parse('graphpos') is Method.GRAPH_POS
    assert Method.parse('GRAPH_MIN_NORM') is Method.GRAPH_MIN_NORM
    assert Method.parse(Method.PROPOSED_REJ) is Method.PROPOSED_REJ
    with pytest.raises(InvalidParameterError):
        Method.parse('Magic')


def test_method_properties():
    assert not Method.GRAPH_POS.uses_negative_edges
    assert Method.PROPOSED_BOUNDARY.uses_negative_edges
    assert Method.PROPOSED_CENTROID.graph_scheme == 'centroid'
    assert Method.PROPOSED_REJ.graph_scheme == 'hybrid'
    assert Method.GRAPH_ADJ_SMOOTH.graph_scheme == 'positive'


@pytest.mark.parametrize('method', list(Method))
def test_every_method_separates_blobs(split, method):
    features, truth, labels, test = split
    classifier = SignedGraphClassifier(method, GraphConfig(omega=4), SolverConfig(mu1=0.1), seed=1)
    signal = classifier.fit_predict(features, labels)
    decisions = signal.decisions[test]
    accepted = decisions != 0
    assert accepted.mean() >= 0.75
    assert np.all(decisions[accepted] == truth[test][accepted])


def test_staged_fit_records_psd_perturbations(split):
    features, _, labels, _ = split
    classifier = SignedGraphClassifier('ProposedHybrid', GraphConfig(omega=4), SolverConfig(mu1=0.1))
    classifier.fit_predict(features, labels)
    stages = [stage for stage, _, _, _ in classifier.perturbations]
    # beta = 1 and beta = 0 need one graph each, the three inner stages need two
    assert len(classifier.perturbations) == 8
    assert sorted(set(stages)) == [0, 1, 2, 3, 4]
    for _, _, L, perturbation in classifier.perturbations:
        oracle = la.eigvalsh(L.toarray())[0]
        assert perturbation.bound <= oracle + 1e-9
        assert la.eigvalsh(perturbation.perturbed.toarray())[0] >= -1e-8


def test_reject_method_defaults():
    classifier = SignedGraphClassifier('ProposedRej')
    assert classifier.solver_config.mu2 == 1.0
    assert classifier.solver_config.reject_target == pytest.approx(0.095)
    explicit = SignedGraphClassifier('ProposedRej', solver_config=SolverConfig(mu2=0.5, reject_threshold=0.01))
    assert explicit.solver_config.mu2 == 0.5
    assert explicit.solver_config.reject_target is None


def test_reject_method_rejects_some_nodes(split):
    features, _, labels, _ = split
    signal = SignedGraphClassifier('ProposedRej', GraphConfig(omega=4)).fit_predict(features, labels)
    assert signal.threshold > 0
    assert np.any(signal.decisions == 0)


def test_min_norm_baseline_records_perturbation(split):
    features, _, labels, _ = split
    classifier = SignedGraphClassifier('GraphMinNorm', GraphConfig(omega=4))
    classifier.fit_predict(features, labels)
    (_, scheme, _, perturbation), = classifier.perturbations
    assert scheme == 'hybrid'
    assert la.eigvalsh(perturbation.perturbed)[0] >= -1e-8


def test_negative_edges_join_labeled_nodes_only(split):
    features, _, labels, _ = split
    classifier = SignedGraphClassifier('ProposedHybrid', GraphConfig(omega=4), SolverConfig(mu1=0.1))
    classifier.fit_predict(features, labels)
    labeled = set(labels.indices.tolist())
    for _, scheme, L, _ in classifier.perturbations:
        L = L.toarray()
        np.fill_diagonal(L, 0.0)
        rows, cols = np.nonzero(L > 0)
        assert rows.size > 0
        assert set(rows.tolist()) | set(cols.tolist()) <= labeled
        if scheme == 'centroid':
            # a single centroid pair takes wMin
            assert L.max() == 10.0


def test_perturbed_laplacian_enters_restoration(split):
    features, _, labels, _ = split
    classifier = SignedGraphClassifier('ProposedCentroid', GraphConfig(omega=4), SolverConfig(mu1=0.1))
    signal = classifier.fit_predict(features, labels)
    (_, _, _, perturbation), = classifier.perturbations
    assert perturbation.eta > 0
    direct = irls_solve(perturbation.perturbed, None, labels, classifier.solver_config)
    assert np.allclose(signal.values, direct.values)


def test_label_count_mismatch(split):
    features, _, _, _ = split
    with pytest.raises(DimensionMismatchError):
        SignedGraphClassifier().fit_predict(features, PartialLabels([0, 1], [1, -1], 10))


if __name__ == "__main__":
    pytest.main()
