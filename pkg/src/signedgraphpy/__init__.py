"""
SignedGraphPy - Robust binary classification on signed similarity graphs.

Samples are nodes of a kNN similarity graph; negative edges between the two
class clusters push their labels apart. The resulting (possibly indefinite)
Laplacian is shifted by a fast lower bound of its smallest eigenvalue so the
restoration problem stays convex, and noisy labels are down-weighted by
iteratively reweighted least squares.

Main components:
- SignedGraphClassifier: Builds the graph for a method and restores the signal
- Method: Enum of classifier variants (ProposedHybrid, GraphPos, ...)
- SignedGraph / build_signed_graph: Graph construction with negative edges
- eval_bound: Block-wise lower bound of the smallest Laplacian eigenvalue
- irls_solve: Robust restoration of the classifier signal
- ExperimentSpec / run_experiment / run_bound_study: Experiment harness
"""

import logging

from .classifier import Method, SignedGraphClassifier
from .eval_bound import eval_bound
from .experiment import ExperimentSpec, TrialResult, TrialResultList, run_experiment, run_bound_study
from .features import FeatureSet, PartialLabels
from .graph import GraphConfig, SignedGraph, build_knn_graph, build_signed_graph
from .laplacian import LaplacianBundle, build_laplacian, combine_laplacians
from .perturbation import lower_bound, min_norm_perturbation, perturb_identity
from .solver import SolverConfig, ClassifierSignal, classify, irls_solve
from .datasets import load_dataset, inject_label_noise, make_crescents, make_blobs
from .exceptions import SignedGraphError

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"
__all__ = [
    'Method', 'SignedGraphClassifier', 'eval_bound', 'ExperimentSpec', 'TrialResult', 'TrialResultList',
    'run_experiment', 'run_bound_study', 'FeatureSet', 'PartialLabels', 'GraphConfig', 'SignedGraph',
    'build_knn_graph', 'build_signed_graph', 'LaplacianBundle', 'build_laplacian', 'combine_laplacians',
    'lower_bound', 'min_norm_perturbation', 'perturb_identity', 'SolverConfig', 'ClassifierSignal',
    'classify', 'irls_solve', 'load_dataset', 'inject_label_noise', 'make_crescents', 'make_blobs',
    'SignedGraphError',
]
