"""
Dataset ingestion, synthetic generators, label noise and train/test splits.
"""

import logging
import re
import warnings
from typing import Tuple

import numpy as np
import pandas as pd
from sklearn.datasets import make_blobs as _sk_make_blobs, make_moons

from .constants import CSV_FLOAT_FORMAT
from .exceptions import DatasetFormatError, InvalidParameterError
from .features import FeatureSet

logger = logging.getLogger(__name__)

_LINE_PATTERN = re.compile(r'line (\d+)')


def _is_blank(row: pd.Series) -> bool:
    return all(pd.isna(v) or str(v).strip() == '' for v in row)


def load_dataset(path, feature_weights=None, bandwidth: float = 1.0) -> Tuple[FeatureSet, np.ndarray]:
    """
    Reads a CSV of Q numeric feature columns followed by a +/-1 label column.

    A non-numeric first row is treated as a header. Labels in {0, 1} are
    mapped to {-1, +1} with a warning.

    Returns:
        tuple: (FeatureSet, labels as an int array of -1/+1)

    Raises:
        DatasetFormatError: On malformed rows, missing or non-binary labels; the
            message and the line_number attribute name the 1-based line
    """
    try:
        raw = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=False, keep_default_na=False)
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        line = int(match.group(1)) if match else None
        raise DatasetFormatError(f"malformed row: {e}", line_number=line, path=path) from e
    except pd.errors.EmptyDataError as e:
        raise DatasetFormatError("file is empty", path=path) from e

    if raw.shape[1] < 2:
        raise DatasetFormatError("expected at least one feature column and a label column", path=path)

    numeric = raw.apply(lambda column: pd.to_numeric(column.str.strip(), errors='coerce'))
    blank = raw.apply(_is_blank, axis=1).to_numpy()
    keep = ~blank
    if keep.any():
        first = int(np.flatnonzero(keep)[0])
        if numeric.iloc[first].isna().all():
            logger.debug("treating line %d of %s as a header", first + 1, path)
            keep[first] = False

    label_column = raw.shape[1] - 1
    for position in np.flatnonzero(keep):
        row = numeric.iloc[position]
        if pd.isna(row.iloc[label_column]):
            text = str(raw.iloc[position, label_column]).strip()
            problem = "missing label" if text == '' else f"label '{text}' is not numeric"
            raise DatasetFormatError(problem, line_number=position + 1, path=path)
        if row.isna().any():
            raise DatasetFormatError("malformed row: non-numeric or missing feature value",
                                     line_number=position + 1, path=path)

    rows = np.flatnonzero(keep)
    values = numeric.iloc[rows].to_numpy(dtype=float)
    features, labels = values[:, :-1], values[:, -1]

    observed = set(np.unique(labels).tolist())
    if observed <= {-1.0, 1.0}:
        pass
    elif observed <= {0.0, 1.0}:
        message = f"{path}: labels are in {{0, 1}}; mapping 0 -> -1 and 1 -> +1"
        warnings.warn(message, UserWarning, stacklevel=2)
        logger.warning(message)
        labels = 2.0 * labels - 1.0
    else:
        bad = int(rows[np.flatnonzero(~np.isin(labels, (-1.0, 1.0)))[0]])
        raise DatasetFormatError(f"labels must be -1/+1 (or 0/1), found {sorted(observed)}",
                                 line_number=bad + 1, path=path)

    return FeatureSet(features, feature_weights, bandwidth), labels.astype(int)


def save_dataset(path, features, labels):
    """Writes features and labels as a header-less CSV readable by load_dataset()."""
    values = features.features if isinstance(features, FeatureSet) else np.asarray(features, dtype=float)
    frame = pd.DataFrame(values)
    frame[values.shape[1]] = np.asarray(labels, dtype=int)
    frame.to_csv(path, header=False, index=False, float_format=CSV_FLOAT_FORMAT)


def make_crescents(n_samples: int = 300, noise: float = 0.15, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Two interleaved crescents (banana-shaped classes) with labels -1/+1."""
    features, labels = make_moons(n_samples=n_samples, noise=noise, random_state=seed)
    return features, 2 * labels.astype(int) - 1


def make_blobs(n_samples: int = 300, separation: float = 6.0, spread: float = 1.0, n_features: int = 2,
               seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Two isotropic Gaussian blobs whose centers lie `separation` apart, labels -1/+1."""
    centers = np.zeros((2, n_features))
    centers[1, 0] = separation
    features, labels = _sk_make_blobs(n_samples=n_samples, centers=centers, cluster_std=spread, random_state=seed)
    return features, 2 * labels.astype(int) - 1


SYNTHETIC_GENERATORS = {
    'crescents': make_crescents,
    'blobs': make_blobs,
}


def noise_positions(count: int, p: float, seed) -> np.ndarray:
    """The round(p * count) positions flipped by inject_label_noise(), in draw order."""
    if not (0.0 <= p < 0.5):
        raise InvalidParameterError(f"noise rate must lie in [0, 0.5), got {p}")
    flips = int(round(p * count))
    return np.random.default_rng(seed).choice(count, size=flips, replace=False)


def inject_label_noise(labels, p: float, seed) -> np.ndarray:
    """
    Flips exactly round(p * K) labels chosen uniformly without replacement.

    The positions depend only on (K, p, seed), so applying the same call twice
    restores the original labels.
    """
    labels = np.asarray(labels)
    noisy = labels.copy()
    positions = noise_positions(labels.size, p, seed)
    noisy[positions] = -noisy[positions]
    return noisy


def train_test_split(n: int, train_fraction: float, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Random permutation split; both parts are returned sorted and non-empty."""
    if not (0.0 < train_fraction < 1.0):
        raise InvalidParameterError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if n < 2:
        raise InvalidParameterError(f"need at least 2 samples to split, got {n}")
    n_train = min(max(int(round(train_fraction * n)), 1), n - 1)
    permutation = rng.permutation(n)
    return np.sort(permutation[:n_train]), np.sort(permutation[n_train:])
