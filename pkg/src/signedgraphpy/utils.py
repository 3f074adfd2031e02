import json
from enum import Enum
from dataclasses import is_dataclass, asdict
from typing import Any

import numpy as np
import scipy.sparse as sp

from .constants import SYMMETRY_TOL
from .exceptions import NonSymmetricMatrixError, DimensionMismatchError


class EnumEncoder(json.JSONEncoder):
    """JSON encoder that also understands enums, numpy scalars/arrays and dataclasses."""
    def default(self, obj):
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if is_dataclass(obj):
            return asdict(obj)
        return super().default(obj)


def ensure_list(item):
	return list(item) if hasattr(item, '__iter__') and not isinstance(item, str) and not isinstance(item, dict) else [item]


def to_dense(A) -> np.ndarray:
	if sp.issparse(A):
		return A.toarray()
	return np.asarray(A, dtype=float)


def max_abs(A) -> float:
	if sp.issparse(A):
		return float(abs(A).max()) if A.nnz else 0.0
	A = np.asarray(A)
	return float(np.max(np.abs(A))) if A.size else 0.0


def check_square(A, name='matrix'):
	if A.ndim != 2 or A.shape[0] != A.shape[1]:
		raise DimensionMismatchError(f"{name} must be square, got shape {A.shape}")


def check_symmetric(A, tol: float = SYMMETRY_TOL):
	"""
	Raises NonSymmetricMatrixError unless max|A - A^T| <= tol * max(1, max|A|).
	"""
	check_square(A)
	diff = A - A.T
	asymmetry = max_abs(diff)
	tolerance = tol * max(1.0, max_abs(A))
	if asymmetry > tolerance:
		raise NonSymmetricMatrixError(asymmetry, tolerance)


def readonly(array) -> np.ndarray:
	array = np.array(array, dtype=float, copy=True)
	array.setflags(write=False)
	return array


def write_json(path, data: Any):
	with open(path, 'w', encoding='utf-8') as f:
		json.dump(data, f, cls=EnumEncoder, indent=2)
