import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from .constants import DEFAULT_EPSILON, DEFAULT_MARGIN, BOUND_SOURCES
from .eval_bound import eval_bound
from .exceptions import InvalidParameterError
from .laplacian import LaplacianBundle
from .spectral import dense_sym_eig, simple_lower_bound, gershgorin_lower_bound
from .utils import check_square, to_dense

logger = logging.getLogger(__name__)


class PerturbationMethod(Enum):
    MIN_NORM = 'min_norm'
    IDENTITY_SHIFT = 'identity_shift'


@dataclass
class PerturbationResult:
    """
    A perturbation Delta that makes L + Delta positive semi-definite.

    Attributes:
        method: MIN_NORM or IDENTITY_SHIFT
        bound: lambda_min lower bound the shift was derived from (0 for MIN_NORM)
        eta: identity shift, max(0, -bound); 0 for MIN_NORM
        tau: per-eigenvalue corrections in L's eigenbasis
        perturbed: L + Delta (sparse when L was sparse and the shift is an identity)
        delta: Delta itself
    """
    method: PerturbationMethod
    bound: float
    eta: float
    tau: np.ndarray
    perturbed: Union[np.ndarray, sp.spmatrix]
    delta: Union[np.ndarray, sp.spmatrix] = field(repr=False, default=None)

    def __repr__(self):
        return f"PerturbationResult(method={self.method.value}, bound={self.bound:.6g}, eta={self.eta:.6g})"


def min_norm_perturbation(L) -> PerturbationResult:
    """
    Clamps the negative eigenvalues of L to zero in L's own eigenbasis.

    Delta = V diag(tau) V^T with tau_i = -lambda_i for negative lambda_i and 0
    otherwise, the smallest such correction in any unitarily invariant norm.
    """
    check_square(L)
    dense = to_dense(L)
    decomposition = dense_sym_eig(dense)
    eigenvalues, V = decomposition.eigenvalues, decomposition.eigenvectors
    tau = np.where(eigenvalues < 0, -eigenvalues, 0.0)

    negative = tau > 0
    V_neg = V[:, negative]
    delta = (V_neg * tau[negative]) @ V_neg.T
    perturbed = dense + delta
    perturbed = 0.5 * (perturbed + perturbed.T)
    logger.debug("min-norm perturbation clamped %d negative eigenvalues", int(negative.sum()))
    return PerturbationResult(PerturbationMethod.MIN_NORM, 0.0, 0.0, tau, perturbed, delta)


def perturb_identity(L, bound: float) -> PerturbationResult:
    """
    Shifts L by eta * I with eta = max(0, -bound).

    Args:
        L: Symmetric matrix, dense or sparse
        bound (float): A lower bound on lambda_min(L), e.g. from eval_bound()

    Returns:
        PerturbationResult: perturbed = L + eta * I, same eigenvectors and eigenvalue spacing as L
    """
    check_square(L)
    n = L.shape[0]
    eta = max(0.0, -float(bound))
    if sp.issparse(L):
        delta = eta * sp.identity(n, format='csr')
        perturbed = (L + delta).tocsr()
    else:
        delta = eta * np.eye(n)
        perturbed = np.asarray(L, dtype=float) + delta
    return PerturbationResult(PerturbationMethod.IDENTITY_SHIFT, float(bound), eta, np.full(n, eta), perturbed, delta)


def lower_bound(bundle: LaplacianBundle, source: str = 'eval_bound', block_size: Optional[int] = None,
                epsilon: float = DEFAULT_EPSILON, seed: int = 0, margin: str = DEFAULT_MARGIN) -> float:
    """
    A lower bound on lambda_min(bundle.L) from the selected source.

    Sources:
        'eval_bound': recursive Schur-complement bound with block size r (default ceil(sqrt(N)))
        'oracle': the exact smallest eigenvalue, capped at 0
        'simple': -lambda_max(-L_neg)
        'gershgorin': Gershgorin disc bound
    """
    if source not in BOUND_SOURCES:
        raise InvalidParameterError(f"unknown bound source '{source}', expected one of {BOUND_SOURCES}")
    if source == 'eval_bound':
        r = block_size or max(1, int(np.ceil(np.sqrt(bundle.node_count))))
        return eval_bound(bundle.L, r, epsilon=epsilon, seed=seed, margin=margin)
    if source == 'oracle':
        return min(dense_sym_eig(bundle.L).min_eigenvalue, 0.0)
    if source == 'simple':
        return simple_lower_bound(bundle, seed=seed)
    return min(gershgorin_lower_bound(bundle.L), 0.0)
