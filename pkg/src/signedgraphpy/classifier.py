import logging
from dataclasses import replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .constants import DEFAULT_REJECT_TARGET
from .exceptions import DimensionMismatchError, InvalidParameterError
from .features import FeatureSet, PartialLabels
from .graph import GraphConfig, SignedGraph, build_knn_graph, build_signed_graph
from .laplacian import build_laplacian, combine_laplacians
from .perturbation import PerturbationResult, lower_bound, min_norm_perturbation, perturb_identity
from .priors import adjacency_shift_operator, generalized_smoothness_matrix
from .solver import SolverConfig, ClassifierSignal, irls_solve

logger = logging.getLogger(__name__)

# mu2 used by ProposedRej when the solver config leaves it at 0
REJECT_DEFAULT_MU2 = 1.0


class Method(Enum):
	'''
	Classifier variants.
	'''
	PROPOSED_CENTROID = 'ProposedCentroid'  # negative edge between class medoids
	PROPOSED_BOUNDARY = 'ProposedBoundary'  # negative edges between boundary pairs
	PROPOSED_HYBRID   = 'ProposedHybrid'    # both, blended by the beta schedule
	PROPOSED_REJ      = 'ProposedRej'       # hybrid + generalized smoothness + reject option
	GRAPH_POS         = 'GraphPos'          # positive kNN graph only
	GRAPH_MIN_NORM    = 'GraphMinNorm'      # negative edges, min-norm perturbation
	GRAPH_ADJ_SMOOTH  = 'GraphAdjSmooth'    # adjacency-shift prior on the positive graph

	@classmethod
	def parse(cls, value) -> 'Method':
		if isinstance(value, cls):
			return value
		for method in cls:
			if value in (method.value, method.name) or str(value).lower() == method.value.lower():
				return method
		raise InvalidParameterError(f"unknown method '{value}', expected one of {[m.value for m in cls]}")

	@property
	def uses_negative_edges(self) -> bool:
		return self not in (Method.GRAPH_POS, Method.GRAPH_ADJ_SMOOTH)

	@property
	def graph_scheme(self) -> str:
		return {
			Method.PROPOSED_CENTROID: 'centroid',
			Method.PROPOSED_BOUNDARY: 'boundary',
			Method.GRAPH_POS: 'positive',
			Method.GRAPH_ADJ_SMOOTH: 'positive',
		}.get(self, 'hybrid')


class SignedGraphClassifier:
	"""
	Graph classifier restoring a binary signal from noisy partial labels.

	Parameters:
		method (Method or str): Classifier variant. Defaults to ProposedHybrid.
		graph_config (GraphConfig): Graph construction and perturbation parameters.
		solver_config (SolverConfig): Restoration parameters.
		seed (int): Seed for the BFS start nodes of eval_bound and the power iteration.

	Example:
		>>> clf = SignedGraphClassifier('ProposedHybrid')
		>>> signal = clf.fit_predict(features, labels)
		>>> signal.decisions
	"""

	def __init__(self, method=Method.PROPOSED_HYBRID, graph_config: Optional[GraphConfig] = None,
				 solver_config: Optional[SolverConfig] = None, seed: int = 0):
		self.method = Method.parse(method)
		self.graph_config = graph_config or GraphConfig()
		self.solver_config = self._method_solver_config(solver_config or SolverConfig())
		self.seed = seed
		# (stage, scheme, Laplacian before perturbation, perturbation) of the last fit
		self.perturbations: List[Tuple[int, str, object, PerturbationResult]] = []

	def _method_solver_config(self, config: SolverConfig) -> SolverConfig:
		if self.method is not Method.PROPOSED_REJ:
			return config
		changes = {}
		if config.mu2 == 0:
			changes['mu2'] = REJECT_DEFAULT_MU2
		if config.reject_target is None and config.reject_threshold == 0:
			changes['reject_target'] = DEFAULT_REJECT_TARGET
		return replace(config, **changes) if changes else config

	def _beta_schedule(self) -> Tuple[float, ...]:
		if self.method is Method.PROPOSED_CENTROID:
			return (1.0,)
		if self.method is Method.PROPOSED_BOUNDARY:
			return (0.0,)
		return self.solver_config.beta_schedule

	def fit_predict(self, features: FeatureSet, labels: PartialLabels) -> ClassifierSignal:
		"""
		Builds the graph for the configured method and restores the signal.

		Args:
			features (FeatureSet): All N samples, labeled and unlabeled
			labels (PartialLabels): Observed (possibly noisy) labels

		Returns:
			ClassifierSignal: Restored values and decisions for all N nodes
		"""
		if labels.node_count != features.n_samples:
			raise DimensionMismatchError(
				f"labels cover {labels.node_count} nodes but there are {features.n_samples} samples")
		self.perturbations = []
		positive = build_knn_graph(features, self.graph_config.omega)
		positive_bundle = build_laplacian(positive)
		Gsq = generalized_smoothness_matrix(positive_bundle.L_pos) if self.solver_config.mu2 > 0 else None

		if self.method is Method.GRAPH_POS:
			return irls_solve(positive_bundle.L, Gsq, labels, self.solver_config)

		if self.method is Method.GRAPH_ADJ_SMOOTH:
			Lg = adjacency_shift_operator(positive_bundle.W, seed=self.seed)
			return irls_solve(Lg, Gsq, labels, self.solver_config)

		if self.method is Method.GRAPH_MIN_NORM:
			graph = build_signed_graph(features, labels, self.graph_config, 'hybrid', positive_graph=positive)
			bundle = build_laplacian(graph)
			perturbation = min_norm_perturbation(bundle.L)
			self.perturbations.append((0, 'hybrid', bundle.L, perturbation))
			return irls_solve(perturbation.perturbed, Gsq, labels, self.solver_config)

		return self._fit_staged(features, labels, positive, Gsq)

	def _perturbed_laplacian(self, features, labels, positive: SignedGraph, scheme: str, stage: int):
		graph = build_signed_graph(features, labels, self.graph_config, scheme, positive_graph=positive)
		bundle = build_laplacian(graph)
		config = self.graph_config
		bound = lower_bound(bundle, config.bound_source, config.block_size_for(bundle.node_count),
							config.epsilon, seed=self.seed, margin=config.margin)
		perturbation = perturb_identity(bundle.L, bound)
		self.perturbations.append((stage, scheme, bundle.L, perturbation))
		logger.debug("stage %d %s graph: bound %.6g, eta %.6g", stage, scheme, bound, perturbation.eta)
		return perturbation.perturbed

	def _graph_labels(self, labels: PartialLabels, signal: Optional[ClassifierSignal]) -> PartialLabels:
		"""
		Labels the negative edges are placed with: the observed labels at the first stage, then
		the current decisions at the labeled nodes. Unlabeled nodes never take part in a pair.
		"""
		if signal is None:
			return labels
		decisions = signal.decisions[labels.indices]
		values = np.where(decisions != 0, decisions, labels.labels)
		estimates = PartialLabels(labels.indices, values, labels.node_count)
		if estimates.classes().size < 2:
			return labels
		return estimates

	def _fit_staged(self, features, labels, positive, Gsq) -> ClassifierSignal:
		signal = None
		total_iterations = 0
		for stage, beta in enumerate(self._beta_schedule()):
			graph_labels = self._graph_labels(labels, signal)
			parts = {}
			if beta > 0:
				parts['centroid'] = self._perturbed_laplacian(features, graph_labels, positive, 'centroid', stage)
			if beta < 1:
				parts['boundary'] = self._perturbed_laplacian(features, graph_labels, positive, 'boundary', stage)
			if len(parts) == 2:
				Lg = combine_laplacians(parts['centroid'], parts['boundary'], beta)
			else:
				Lg = next(iter(parts.values()))
			signal = irls_solve(Lg, Gsq, labels, self.solver_config,
								x0=None if signal is None else signal.values)
			total_iterations += signal.iterations
			logger.info("%s stage %d (beta=%.2f): %s", self.method.value, stage, beta, signal.brief_summary())
		signal.iterations = total_iterations
		return signal

	def __repr__(self):
		return f"SignedGraphClassifier(method={self.method.value}, seed={self.seed})"
