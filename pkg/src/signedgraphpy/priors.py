"""
Graph signal priors.

The quadratic prior x^T L x is what the classifier minimizes. The other kinds
reproduce the alternative priors that misbehave on signed graphs and are kept
for diagnostics.
"""

from enum import Enum
from typing import Union

import numpy as np
import scipy.sparse as sp

from .exceptions import InvalidParameterError, InvalidOperatorError, DimensionMismatchError
from .laplacian import LaplacianBundle
from .spectral import power_iteration_max_eig
from .utils import check_square, check_symmetric


class PriorKind(Enum):
    QUADRATIC = 'quadratic'
    ADJACENCY_SHIFT = 'adjacency_shift'
    L1 = 'l1'
    SIGNED_QUADRATIC = 'signed_quadratic'


def _as_kind(kind) -> PriorKind:
    if isinstance(kind, PriorKind):
        return kind
    try:
        return PriorKind(str(kind).lower())
    except ValueError:
        raise InvalidParameterError(
            f"unknown prior kind '{kind}', expected one of {[k.value for k in PriorKind]}") from None


def evaluate_prior(x, bundle: LaplacianBundle, kind: Union[PriorKind, str] = PriorKind.QUADRATIC) -> float:
    """
    Evaluates a smoothness prior on signal x.

    Args:
        x (array-like): Graph signal of length N
        bundle (LaplacianBundle): Laplacians of the graph
        kind (PriorKind or str): QUADRATIC (x^T L x), ADJACENCY_SHIFT (||x - W x||^2),
            L1 (||L x||_1) or SIGNED_QUADRATIC (x^T L_signed x)

    Returns:
        float: The prior value
    """
    kind = _as_kind(kind)
    x = np.asarray(x, dtype=float).ravel()
    if x.size != bundle.node_count:
        raise DimensionMismatchError(f"signal has length {x.size}, graph has {bundle.node_count} nodes")

    if kind is PriorKind.QUADRATIC:
        return float(x @ (bundle.L @ x))
    if kind is PriorKind.ADJACENCY_SHIFT:
        residual = x - bundle.W @ x
        return float(residual @ residual)
    if kind is PriorKind.L1:
        return float(np.abs(bundle.L @ x).sum())
    return float(x @ (bundle.L_signed @ x))


def generalized_smoothness_matrix(L_pos) -> sp.csr_matrix:
    """
    (L+)^2, the operator of the generalized smoothness prior ||L+ x||^2.

    Raises:
        InvalidOperatorError: If L_pos has a positive off-diagonal entry, i.e. a negative edge
    """
    check_square(L_pos)
    check_symmetric(L_pos)
    L_pos = sp.csr_matrix(L_pos, dtype=float)
    off = (L_pos - sp.diags(L_pos.diagonal())).tocsr()
    if off.nnz and off.data.max() > 0:
        raise InvalidOperatorError(
            "generalized smoothness needs the positive-edge Laplacian; "
            "found a positive off-diagonal entry (negative edge weight)"
        )
    G = (L_pos @ L_pos).tocsr()
    return (0.5 * (G + G.T)).tocsr()


def adjacency_shift_operator(W, seed: int = 0) -> sp.csr_matrix:
    """
    (I - W~)^T (I - W~) with W~ = W / |lambda|_max(W).

    This is the quadratic form of the adjacency-shift prior ||x - W~ x||^2
    used by the GraphAdjSmooth baseline.
    """
    W = sp.csr_matrix(W, dtype=float)
    n = W.shape[0]
    spectral_radius = np.sqrt(max(power_iteration_max_eig(W @ W, seed=seed).value, 0.0))
    if spectral_radius == 0.0:
        raise InvalidOperatorError("adjacency matrix has no edges")
    shift = (sp.identity(n, format='csr') - W / spectral_radius).tocsr()
    return (shift.T @ shift).tocsr()
