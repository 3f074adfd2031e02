"""
Signed similarity graphs.

A positive-edge kNN graph is built with a Gaussian kernel, then negative edges
are added between class medoids ("centroid" scheme) and/or between
mutually-nearest cross-class pairs ("boundary" scheme).
"""

import logging
from dataclasses import dataclass, asdict, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp

from .constants import (
    DEFAULT_OMEGA, DEFAULT_BANDWIDTH, DEFAULT_MAX_BOUNDARY_PAIRS, DEFAULT_CENTROID_RANGE,
    DEFAULT_BOUNDARY_RANGE, MIN_NEGATIVE_FRACTION, NEGATIVE_WEIGHT_CONVENTIONS,
    DEFAULT_EPSILON, DEFAULT_MARGIN, MARGIN_RULES, BOUND_SOURCES,
)
from .exceptions import (
    InvalidParameterError, InvalidEdgeError, DegenerateClusteringError, DatasetFormatError,
)
from .features import FeatureSet, PartialLabels

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, float]
Pair = Tuple[int, int]

GRAPH_SCHEMES = ('positive', 'centroid', 'boundary', 'hybrid')


class SignedGraph:
    """
    Undirected weighted graph whose edge weights may be negative.

    Each unordered pair {i, j} is stored once as (min, max). Self-loops, zero
    and non-finite weights are rejected. Instances are immutable; use
    with_edges() to obtain a modified copy.

    Parameters:
        node_count (int): Number of nodes N
        edges (iterable): (i, j, w) triples. A repeated pair keeps the last weight.
    """
    def __init__(self, node_count: int, edges: Iterable[Edge] = ()):
        if node_count < 1:
            raise InvalidParameterError(f"node_count must be positive, got {node_count}")
        self.node_count = int(node_count)
        self._edges: Dict[Pair, float] = {}
        for i, j, w in edges:
            self._set_edge(int(i), int(j), float(w))

    def _set_edge(self, i: int, j: int, w: float):
        if i == j:
            raise InvalidEdgeError(f"self-loop on node {i} is not allowed")
        if not (0 <= i < self.node_count and 0 <= j < self.node_count):
            raise InvalidEdgeError(f"edge ({i}, {j}) references a node outside [0, {self.node_count})")
        if not np.isfinite(w) or w == 0.0:
            raise InvalidEdgeError(f"edge ({i}, {j}) has invalid weight {w}")
        self._edges[(min(i, j), max(i, j))] = w

    @classmethod
    def from_weight_matrix(cls, W) -> 'SignedGraph':
        """Builds a graph from the upper triangle of a symmetric weight matrix."""
        W = sp.triu(sp.csr_matrix(W, dtype=float), k=1).tocoo()
        return cls(W.shape[0], ((i, j, w) for i, j, w in zip(W.row, W.col, W.data) if w != 0.0))

    def with_edges(self, edges: Iterable[Edge]) -> 'SignedGraph':
        """Returns a copy with the given edges inserted or overwritten."""
        graph = SignedGraph(self.node_count)
        graph._edges = dict(self._edges)
        for i, j, w in edges:
            graph._set_edge(int(i), int(j), float(w))
        return graph

    def edges(self) -> List[Edge]:
        return [(i, j, w) for (i, j), w in sorted(self._edges.items())]

    def positive_edges(self) -> List[Edge]:
        return [e for e in self.edges() if e[2] > 0]

    def negative_edges(self) -> List[Edge]:
        return [e for e in self.edges() if e[2] < 0]

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def weight(self, i: int, j: int) -> float:
        return self._edges.get((min(i, j), max(i, j)), 0.0)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edges

    def weight_matrix(self) -> sp.csr_matrix:
        """Symmetric N x N CSR weight matrix (W == W.T exactly)."""
        n = self.node_count
        if not self._edges:
            return sp.csr_matrix((n, n))
        pairs = np.array(list(self._edges.keys()), dtype=int)
        weights = np.fromiter(self._edges.values(), dtype=float, count=len(self._edges))
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        W = sp.csr_matrix((np.concatenate([weights, weights]), (rows, cols)), shape=(n, n))
        W.sort_indices()
        return W

    def degree_counts(self) -> np.ndarray:
        counts = np.zeros(self.node_count, dtype=int)
        for i, j in self._edges:
            counts[i] += 1
            counts[j] += 1
        return counts

    def to_edge_list(self, path):
        """Writes the graph as 'i j w' lines with 0-based node ids."""
        frame = pd.DataFrame(self.edges(), columns=['i', 'j', 'w'])
        frame.to_csv(path, sep=' ', header=False, index=False, float_format='%.17g')

    @classmethod
    def from_edge_list(cls, path, node_count: Optional[int] = None) -> 'SignedGraph':
        try:
            frame = pd.read_csv(path, sep=r'\s+', header=None, names=['i', 'j', 'w'], comment='#',
                                float_precision='round_trip')
            i = pd.to_numeric(frame['i']).to_numpy(dtype=int)
            j = pd.to_numeric(frame['j']).to_numpy(dtype=int)
            w = pd.to_numeric(frame['w']).to_numpy(dtype=float)
        except (ValueError, pd.errors.ParserError) as e:
            raise DatasetFormatError(f"could not parse edge list: {e}", path=path) from e
        if node_count is None:
            node_count = int(max(i.max(initial=-1), j.max(initial=-1))) + 1
        return cls(node_count, zip(i, j, w))

    def __eq__(self, other):
        return isinstance(other, SignedGraph) and self.node_count == other.node_count and self._edges == other._edges

    def __repr__(self):
        return (f"SignedGraph(node_count={self.node_count}, positive_edges={len(self.positive_edges())}, "
                f"negative_edges={len(self.negative_edges())})")


def build_knn_graph(features: FeatureSet, omega: int = DEFAULT_OMEGA) -> SignedGraph:
    """
    Builds the symmetrized kNN graph with Gaussian kernel weights.

    Each node is connected to its omega nearest neighbors under the
    Xi-weighted squared Euclidean distance, and the union of those directed
    choices is kept. Edge weights are exp(-d / sigma_h^2); a weight that
    underflows is floored at the smallest positive double so the edge stays.

    Args:
        features (FeatureSet): Samples, feature weights and bandwidth
        omega (int): Number of neighbors per node, 1 <= omega < N

    Returns:
        SignedGraph: Graph with positive weights in (0, 1]

    Raises:
        InvalidParameterError: If omega is not in [1, N)
    """
    n = features.n_samples
    if not (1 <= omega < n):
        raise InvalidParameterError(f"omega must satisfy 1 <= omega < N={n}, got {omega}")

    sq_dist = features.weighted_sq_distances()
    np.fill_diagonal(sq_dist, np.inf)
    # stable sort: equal distances keep ascending column order, so the lowest id wins
    neighbors = np.argsort(sq_dist, axis=1, kind='stable')[:, :omega]

    rows = np.repeat(np.arange(n), omega)
    cols = neighbors.ravel()
    pairs = np.unique(np.stack([np.minimum(rows, cols), np.maximum(rows, cols)], axis=1), axis=0)
    weights = np.exp(-sq_dist[pairs[:, 0], pairs[:, 1]] / features.bandwidth ** 2)
    weights = np.maximum(weights, np.finfo(float).tiny)

    logger.debug("kNN graph: %d nodes, omega=%d, %d edges", n, omega, len(pairs))
    return SignedGraph(n, zip(pairs[:, 0], pairs[:, 1], weights))


def _split_classes(labels: PartialLabels):
    classes = labels.classes()
    if classes.size < 2:
        raise DegenerateClusteringError(int(classes[0]) if classes.size else None)
    order = np.argsort(labels.indices, kind='stable')
    indices, values = labels.indices[order], labels.labels[order]
    return indices[values < 0], indices[values > 0]


def find_centroid_pair(features: FeatureSet, labels: PartialLabels) -> Pair:
    """
    Returns (negative-class medoid, positive-class medoid).

    The medoid of a class is the labeled sample minimizing the sum of
    Xi-weighted distances to all samples carrying the same label; ties go to
    the lowest node id.
    """
    medoids = []
    for members in _split_classes(labels):
        sums = features.weighted_distances(members, members).sum(axis=1)
        medoids.append(int(members[np.argmin(sums)]))
    return medoids[0], medoids[1]


def find_boundary_pairs(features: FeatureSet, labels: PartialLabels,
                        max_pairs: int = DEFAULT_MAX_BOUNDARY_PAIRS) -> List[Pair]:
    """
    Returns up to max_pairs mutually-nearest cross-class pairs, ascending by distance.

    Cross-class pairs are visited in order of (distance, lower id, higher id);
    a pair is accepted when neither endpoint is used yet, which makes it the
    mutually nearest pair among the remaining nodes. Pairs are (negative-class
    node, positive-class node).
    """
    if max_pairs < 1:
        raise InvalidParameterError(f"max_pairs must be positive, got {max_pairs}")
    negatives, positives = _split_classes(labels)
    dist = features.weighted_distances(negatives, positives)

    neg_ids = np.repeat(negatives, positives.size)
    pos_ids = np.tile(positives, negatives.size)
    order = np.lexsort((np.maximum(neg_ids, pos_ids), np.minimum(neg_ids, pos_ids), dist.ravel()))

    used = set()
    pairs: List[Pair] = []
    for k in order:
        i, j = int(neg_ids[k]), int(pos_ids[k])
        if i in used or j in used:
            continue
        pairs.append((i, j))
        used.update((i, j))
        if len(pairs) == max_pairs or len(pairs) == min(negatives.size, positives.size):
            break
    return pairs


def negative_weights(distances: np.ndarray, weight_range: Tuple[float, float] = DEFAULT_CENTROID_RANGE,
                     convention: str = 'proportional') -> np.ndarray:
    """
    Maps pair distances onto [wMin, 0).

    'proportional': w = wMin * d / d_max, the farthest pair gets wMin.
    'inverse': w = wMin * (1 - d / d_max), the closest pair gets the strongest weight.
    Magnitudes are floored at MIN_NEGATIVE_FRACTION * |wMin| so no weight is zero.
    """
    w_min, w_max = weight_range
    if not (np.isfinite(w_min) and w_min < 0):
        raise InvalidParameterError(f"wMin must be negative, got {w_min}")
    if w_max != 0:
        raise InvalidParameterError(f"the upper end of the weight range must be 0, got {w_max}")
    if convention not in NEGATIVE_WEIGHT_CONVENTIONS:
        raise InvalidParameterError(f"unknown convention '{convention}', expected one of {NEGATIVE_WEIGHT_CONVENTIONS}")

    distances = np.asarray(distances, dtype=float)
    if distances.size <= 1:
        return np.full(distances.size, float(w_min))
    d_max = distances.max()
    if d_max <= 0:
        return np.full(distances.size, float(w_min))
    fraction = distances / d_max
    if convention == 'inverse':
        fraction = 1.0 - fraction
    return w_min * np.maximum(fraction, MIN_NEGATIVE_FRACTION)


def add_negative_edges(graph: SignedGraph, pairs: Sequence[Pair], features: FeatureSet,
                       weight_range: Tuple[float, float] = DEFAULT_CENTROID_RANGE,
                       convention: str = 'proportional') -> SignedGraph:
    """
    Inserts or overwrites one negative edge per pair.

    Args:
        graph (SignedGraph): Graph to extend
        pairs (list): (i, j) node pairs
        features (FeatureSet): Features used for pair distances
        weight_range (tuple): (wMin, 0) with wMin < 0
        convention (str): 'proportional' (default) or 'inverse', see negative_weights()

    Returns:
        SignedGraph: New graph; edges not named in pairs are unchanged

    Raises:
        InvalidEdgeError: If a pair is a self-loop or references an unknown node
        InvalidParameterError: If the weight range or convention is invalid
    """
    pairs = [(int(i), int(j)) for i, j in pairs]
    for i, j in pairs:
        if i == j:
            raise InvalidEdgeError(f"negative edge pair ({i}, {j}) is a self-loop")
        if not (0 <= i < graph.node_count and 0 <= j < graph.node_count):
            raise InvalidEdgeError(f"pair ({i}, {j}) references a node outside [0, {graph.node_count})")
    if not pairs:
        return graph
    weights = negative_weights(features.pair_distances(pairs), weight_range, convention)
    return graph.with_edges((i, j, w) for (i, j), w in zip(pairs, weights))


@dataclass
class GraphConfig:
    """Graph construction and perturbation parameters."""
    omega: int = DEFAULT_OMEGA
    bandwidth: float = DEFAULT_BANDWIDTH
    feature_weights: Optional[Tuple[float, ...]] = None
    centroid_weight_range: Tuple[float, float] = DEFAULT_CENTROID_RANGE
    boundary_weight_range: Tuple[float, float] = DEFAULT_BOUNDARY_RANGE
    max_boundary_pairs: int = DEFAULT_MAX_BOUNDARY_PAIRS
    negative_weight_convention: str = 'proportional'
    bound_source: str = 'eval_bound'
    block_size: Optional[int] = None
    epsilon: float = DEFAULT_EPSILON
    margin: str = DEFAULT_MARGIN

    def __post_init__(self):
        self.centroid_weight_range = tuple(float(v) for v in self.centroid_weight_range)
        self.boundary_weight_range = tuple(float(v) for v in self.boundary_weight_range)
        if self.feature_weights is not None:
            self.feature_weights = tuple(float(v) for v in self.feature_weights)
        if self.omega < 1:
            raise InvalidParameterError(f"omega must be positive, got {self.omega}")
        if not self.bandwidth > 0:
            raise InvalidParameterError(f"bandwidth must be positive, got {self.bandwidth}")
        for name in ('centroid_weight_range', 'boundary_weight_range'):
            w_min, w_max = getattr(self, name)
            if not (w_min < 0 and w_max == 0):
                raise InvalidParameterError(f"{name} must be (wMin, 0) with wMin < 0, got {(w_min, w_max)}")
        if self.max_boundary_pairs < 1:
            raise InvalidParameterError(f"max_boundary_pairs must be positive, got {self.max_boundary_pairs}")
        if self.negative_weight_convention not in NEGATIVE_WEIGHT_CONVENTIONS:
            raise InvalidParameterError(f"negative_weight_convention must be one of {NEGATIVE_WEIGHT_CONVENTIONS}")
        if self.bound_source not in BOUND_SOURCES:
            raise InvalidParameterError(f"bound_source must be one of {BOUND_SOURCES}")
        if self.block_size is not None and self.block_size < 1:
            raise InvalidParameterError(f"block_size must be positive, got {self.block_size}")
        if not self.epsilon > 0:
            raise InvalidParameterError(f"epsilon must be positive, got {self.epsilon}")
        if self.margin not in MARGIN_RULES:
            raise InvalidParameterError(f"margin must be one of {MARGIN_RULES}")

    def block_size_for(self, node_count: int) -> int:
        """The configured r, or ceil(sqrt(N)) when unset."""
        if self.block_size is not None:
            return self.block_size
        return max(1, int(np.ceil(np.sqrt(node_count))))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'GraphConfig':
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


def build_signed_graph(features: FeatureSet, labels: PartialLabels, config: GraphConfig = None,
                       scheme: str = 'hybrid', positive_graph: Optional[SignedGraph] = None) -> SignedGraph:
    """
    kNN graph plus negative edges for the given scheme.

    scheme is one of 'positive', 'centroid', 'boundary' or 'hybrid' (both
    centroid and boundary edges). positive_graph can be passed to reuse an
    already built kNN graph.
    """
    config = config or GraphConfig()
    if scheme not in GRAPH_SCHEMES:
        raise InvalidParameterError(f"unknown graph scheme '{scheme}', expected one of {GRAPH_SCHEMES}")
    graph = positive_graph if positive_graph is not None else build_knn_graph(features, config.omega)
    if scheme in ('centroid', 'hybrid'):
        graph = add_negative_edges(graph, [find_centroid_pair(features, labels)], features,
                                   config.centroid_weight_range, config.negative_weight_convention)
    if scheme in ('boundary', 'hybrid'):
        pairs = find_boundary_pairs(features, labels, config.max_boundary_pairs)
        graph = add_negative_edges(graph, pairs, features,
                                   config.boundary_weight_range, config.negative_weight_convention)
    return graph
