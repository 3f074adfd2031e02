from typing import Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp
from sklearn.metrics import pairwise_distances

from .constants import DEFAULT_BANDWIDTH
from .exceptions import InvalidParameterError, DimensionMismatchError, DatasetFormatError
from .utils import readonly


class FeatureSet:
    """
    N samples with Q real features, diagonal feature weights and a kernel bandwidth.

    Parameters:
        features (array-like): N x Q matrix of finite reals
        feature_weights (array-like, optional): Q non-negative weights (diagonal of Xi). Defaults to ones.
        bandwidth (float): Gaussian kernel bandwidth sigma_h > 0. Defaults to 1.

    The arrays are stored read-only, so instances can be shared freely.
    """
    def __init__(self, features, feature_weights=None, bandwidth: float = DEFAULT_BANDWIDTH):
        features = np.asarray(features, dtype=float)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        if features.ndim != 2:
            raise InvalidParameterError(f"features must be a 2-D matrix, got {features.ndim} dimensions")
        n, q = features.shape
        if n < 2 or q < 1:
            raise InvalidParameterError(f"need at least 2 samples and 1 feature, got {n} x {q}")
        if not np.all(np.isfinite(features)):
            raise InvalidParameterError("features contain NaN or infinite values")

        if feature_weights is None:
            feature_weights = np.ones(q)
        feature_weights = np.asarray(feature_weights, dtype=float).ravel()
        if feature_weights.shape != (q,):
            raise DimensionMismatchError(f"expected {q} feature weights, got {feature_weights.shape[0]}")
        if np.any(feature_weights < 0) or not np.all(np.isfinite(feature_weights)):
            raise InvalidParameterError("feature weights must be finite and non-negative")
        if not (np.isfinite(bandwidth) and bandwidth > 0):
            raise InvalidParameterError(f"bandwidth must be positive, got {bandwidth}")

        self.features = readonly(features)
        self.feature_weights = readonly(feature_weights)
        self.bandwidth = float(bandwidth)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def __len__(self):
        return self.n_samples

    def scaled(self) -> np.ndarray:
        """Features multiplied by sqrt(Xi), so plain Euclidean distance is the Xi-weighted one."""
        return self.features * np.sqrt(self.feature_weights)

    def weighted_sq_distances(self, rows=None, cols=None) -> np.ndarray:
        """Matrix of (h_i - h_j)^T Xi (h_i - h_j)."""
        scaled = self.scaled()
        a = scaled if rows is None else scaled[np.asarray(rows, dtype=int)]
        b = scaled if cols is None else scaled[np.asarray(cols, dtype=int)]
        return np.maximum(pairwise_distances(a, b, metric='sqeuclidean'), 0.0)

    def weighted_distances(self, rows=None, cols=None) -> np.ndarray:
        return np.sqrt(self.weighted_sq_distances(rows, cols))

    def pair_distances(self, pairs: Iterable[Tuple[int, int]]) -> np.ndarray:
        pairs = np.asarray(list(pairs), dtype=int).reshape(-1, 2)
        diff = self.scaled()[pairs[:, 0]] - self.scaled()[pairs[:, 1]]
        return np.sqrt(np.sum(diff * diff, axis=1))

    def subset(self, indices) -> 'FeatureSet':
        return FeatureSet(self.features[np.asarray(indices, dtype=int)], self.feature_weights, self.bandwidth)

    @classmethod
    def from_csv(cls, path, feature_weights=None, bandwidth: float = DEFAULT_BANDWIDTH) -> 'FeatureSet':
        """Reads a CSV file with one sample per row and Q numeric columns (no label column)."""
        try:
            frame = pd.read_csv(path, header=None, comment='#', skipinitialspace=True,
                                float_precision='round_trip')
            values = frame.apply(pd.to_numeric, errors='raise').to_numpy(dtype=float)
        except (ValueError, pd.errors.ParserError) as e:
            raise DatasetFormatError(f"could not parse feature file: {e}", path=path) from e
        return cls(values, feature_weights, bandwidth)

    def __repr__(self):
        return f"FeatureSet(n_samples={self.n_samples}, n_features={self.n_features}, bandwidth={self.bandwidth})"


class PartialLabels:
    """
    Observed +/-1 labels on a subset of the N nodes.

    Args:
        indices: node ids of the labeled nodes, distinct and within [0, node_count)
        labels: the observed labels, each -1 or +1
        node_count: N
        noise_rate: optional label noise rate p in [0, 0.5), metadata only
    """
    def __init__(self, indices, labels, node_count: int, noise_rate: Optional[float] = None):
        indices = np.asarray(indices, dtype=int).ravel()
        labels = np.asarray(labels, dtype=float).ravel()
        if indices.shape != labels.shape:
            raise DimensionMismatchError(f"{indices.size} indices but {labels.size} labels")
        if node_count < 1:
            raise InvalidParameterError(f"node_count must be positive, got {node_count}")
        if indices.size > node_count:
            raise InvalidParameterError(f"{indices.size} labels for only {node_count} nodes")
        if indices.size and (indices.min() < 0 or indices.max() >= node_count):
            raise InvalidParameterError(f"label indices must lie in [0, {node_count})")
        if np.unique(indices).size != indices.size:
            raise InvalidParameterError("label indices must be distinct")
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise InvalidParameterError("labels must be -1 or +1")
        if noise_rate is not None and not (0.0 <= noise_rate < 0.5):
            raise InvalidParameterError(f"noise rate must lie in [0, 0.5), got {noise_rate}")

        self.indices = indices
        self.indices.setflags(write=False)
        self.labels = readonly(labels)
        self.node_count = int(node_count)
        self.noise_rate = noise_rate

    @classmethod
    def from_pairs(cls, observed: Iterable[Tuple[int, int]], node_count: int, noise_rate=None) -> 'PartialLabels':
        observed = list(observed)
        if not observed:
            return cls([], [], node_count, noise_rate)
        indices, labels = zip(*observed)
        return cls(indices, labels, node_count, noise_rate)

    @classmethod
    def from_csv(cls, path, node_count: int) -> 'PartialLabels':
        """Reads a CSV with columns (index, label)."""
        try:
            frame = pd.read_csv(path, header=None, comment='#', skipinitialspace=True)
            if frame.shape[1] != 2:
                raise DatasetFormatError(f"expected 2 columns (index, label), got {frame.shape[1]}", path=path)
            if not pd.api.types.is_numeric_dtype(frame[0]):
                frame = frame.iloc[1:]
            indices = pd.to_numeric(frame[0]).to_numpy(dtype=int)
            labels = pd.to_numeric(frame[1]).to_numpy(dtype=float)
        except (ValueError, pd.errors.ParserError) as e:
            if isinstance(e, DatasetFormatError):
                raise
            raise DatasetFormatError(f"could not parse label file: {e}", path=path) from e
        return cls(indices, labels, node_count)

    @property
    def count(self) -> int:
        return int(self.indices.size)

    def __len__(self):
        return self.count

    @property
    def observed(self) -> List[Tuple[int, int]]:
        return [(int(i), int(y)) for i, y in zip(self.indices, self.labels)]

    def classes(self) -> np.ndarray:
        return np.unique(self.labels)

    def selection_matrix(self) -> sp.csr_matrix:
        """The K x N sampling operator H with a single 1 per row."""
        k = self.count
        return sp.csr_matrix((np.ones(k), (np.arange(k), self.indices)), shape=(k, self.node_count))

    def scatter(self) -> np.ndarray:
        """H^T y: observed labels at their nodes, zeros elsewhere."""
        x = np.zeros(self.node_count)
        x[self.indices] = self.labels
        return x

    def with_labels(self, labels) -> 'PartialLabels':
        return PartialLabels(self.indices, labels, self.node_count, self.noise_rate)

    def __repr__(self):
        return f"PartialLabels(count={self.count}, node_count={self.node_count}, noise_rate={self.noise_rate})"
