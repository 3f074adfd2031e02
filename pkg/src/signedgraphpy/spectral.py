"""
Dense eigen-oracle, power iteration, cheap eigenvalue lower bounds, Schur
complements and matrix inertia.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
import scipy.linalg as la
import scipy.sparse as sp

from .constants import POWER_ITERATION_TOL, POWER_ITERATION_MAX_ITER, INERTIA_ZERO_TOL
from .exceptions import InvalidParameterError, SingularBlockError, DatasetFormatError
from .laplacian import LaplacianBundle
from .utils import to_dense, max_abs, check_symmetric, check_square, readonly

logger = logging.getLogger(__name__)


class EigenDecomposition:
    """
    Eigenvalues in ascending order with matching orthonormal eigenvectors (columns).
    """
    def __init__(self, eigenvalues, eigenvectors):
        self.eigenvalues = readonly(eigenvalues)
        self.eigenvectors = readonly(eigenvectors)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def coefficients(self, x) -> np.ndarray:
        """Graph Fourier coefficients alpha = V^T x."""
        return self.eigenvectors.T @ np.asarray(x, dtype=float)

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.T

    def __len__(self):
        return self.eigenvalues.size

    def __repr__(self):
        return f"EigenDecomposition(n={len(self)}, min={self.min_eigenvalue:.6g}, max={self.max_eigenvalue:.6g})"


@dataclass(frozen=True)
class Inertia:
    """Counts of positive, negative and zero eigenvalues."""
    positive: int
    negative: int
    zero: int

    @property
    def size(self) -> int:
        return self.positive + self.negative + self.zero

    def __add__(self, other: 'Inertia') -> 'Inertia':
        return Inertia(self.positive + other.positive, self.negative + other.negative, self.zero + other.zero)


@dataclass(frozen=True)
class PowerIterationResult:
    value: float
    residual: float
    iterations: int
    converged: bool

    def __float__(self):
        return self.value


def dense_sym_eig(A) -> EigenDecomposition:
    """
    Full eigendecomposition of a symmetric matrix.

    Raises:
        NonSymmetricMatrixError: If A deviates from symmetry by more than 1e-10 * max(1, max|A|)
    """
    A = to_dense(A)
    check_symmetric(A)
    eigenvalues, eigenvectors = la.eigh(0.5 * (A + A.T))
    return EigenDecomposition(eigenvalues, eigenvectors)


def power_iteration_max_eig(A, tol: float = POWER_ITERATION_TOL, max_iter: int = POWER_ITERATION_MAX_ITER,
                            seed: int = 0) -> PowerIterationResult:
    """
    Largest eigenvalue of a symmetric PSD matrix by power iteration.

    Stops when the residual ||A x - lambda x|| drops to tol * |lambda|. When
    max_iter is exhausted the best iterate is returned with converged=False.

    Args:
        A: Symmetric PSD matrix, dense or sparse
        tol (float): Relative residual tolerance
        max_iter (int): Iteration cap
        seed (int): Seed of the random start vector

    Returns:
        PowerIterationResult: value, final residual norm, iterations and convergence flag
    """
    if tol <= 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise InvalidParameterError(f"max_iter must be positive, got {max_iter}")
    check_square(A)
    n = A.shape[0]
    x = np.random.default_rng(seed).standard_normal(n)
    x /= np.linalg.norm(x)

    value, residual = 0.0, np.inf
    for iteration in range(1, max_iter + 1):
        y = A @ x
        value = float(x @ y)
        residual = float(np.linalg.norm(y - value * x))
        if residual <= tol * abs(value) or residual == 0.0:
            return PowerIterationResult(value, residual, iteration, True)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return PowerIterationResult(0.0, 0.0, iteration, True)
        x = y / norm

    logger.warning("Power iteration did not converge in %d iterations (residual %.3e)", max_iter, residual)
    return PowerIterationResult(value, residual, max_iter, False)


def simple_lower_bound(bundle: LaplacianBundle, tol: float = POWER_ITERATION_TOL,
                       max_iter: int = POWER_ITERATION_MAX_ITER, seed: int = 0) -> float:
    """
    -lambda_max(-L_neg), a lower bound on lambda_min(L) since L_pos is PSD.

    The final residual is added to the power-iteration estimate so the
    returned value errs on the low side.
    """
    if not bundle.has_negative_edges:
        return 0.0
    result = power_iteration_max_eig(-bundle.L_neg, tol=tol, max_iter=max_iter, seed=seed)
    return -(result.value + result.residual)


def gershgorin_lower_bound(L) -> float:
    """min_i (L_ii - sum_{j != i} |L_ij|)."""
    check_square(L)
    if sp.issparse(L):
        L = sp.csr_matrix(L)
        diagonal = L.diagonal()
        off = (L - sp.diags(diagonal)).tocsr()
        off_sums = np.asarray(abs(off).sum(axis=1)).ravel()
    else:
        L = np.asarray(L, dtype=float)
        diagonal = np.diag(L).copy()
        off = L - np.diag(diagonal)
        off_sums = np.abs(off).sum(axis=1)
    return float(np.min(diagonal - off_sums))


def _split_blocks(L, r: int):
    if sp.issparse(L):
        L = sp.csr_matrix(L)
        return L[:r, :r].toarray(), L[:r, r:], L[r:, r:]
    L = np.asarray(L, dtype=float)
    return L[:r, :r], L[:r, r:], L[r:, r:]


def schur_complement(L, block_size: int) -> np.ndarray:
    """
    L22 - L12^T L11^{-1} L12 for the leading block of size r.

    Args:
        L: Symmetric matrix, dense or sparse
        block_size (int): r, with 1 <= r < N

    Returns:
        numpy.ndarray: The (N - r) x (N - r) Schur complement

    Raises:
        SingularBlockError: If the leading r x r block is singular
    """
    check_square(L)
    n = L.shape[0]
    r = int(block_size)
    if not (1 <= r < n):
        raise InvalidParameterError(f"block_size must satisfy 1 <= r < N={n}, got {block_size}")
    L11, L12, L22 = _split_blocks(L, r)
    L12 = to_dense(L12)
    L22 = to_dense(L22)
    try:
        factor = la.cho_factor(L11)
        X = la.cho_solve(factor, L12)
    except la.LinAlgError:
        eigenvalues = la.eigvalsh(L11)
        if np.min(np.abs(eigenvalues)) <= INERTIA_ZERO_TOL * max(1.0, max_abs(L11)):
            raise SingularBlockError(
                f"leading {r} x {r} block is singular (smallest |eigenvalue| {np.min(np.abs(eigenvalues)):.3e})"
            )
        X = la.solve(L11, L12, assume_a='sym')
    S = L22 - L12.T @ X
    return 0.5 * (S + S.T)


def inertia_of(A, zero_tol: float = None) -> Inertia:
    """
    Counts eigenvalues above zero_tol, below -zero_tol and in between.

    zero_tol defaults to 1e-8 * max(1, max|A|).
    """
    A = to_dense(A)
    if zero_tol is None:
        zero_tol = INERTIA_ZERO_TOL * max(1.0, max_abs(A))
    if zero_tol < 0:
        raise InvalidParameterError(f"zero_tol must be non-negative, got {zero_tol}")
    eigenvalues = la.eigvalsh(0.5 * (A + A.T))
    positive = int(np.sum(eigenvalues > zero_tol))
    negative = int(np.sum(eigenvalues < -zero_tol))
    return Inertia(positive, negative, eigenvalues.size - positive - negative)


def write_matrix(path, A):
    """Writes the upper triangle of a symmetric matrix as 'i j value' lines."""
    U = sp.triu(sp.csr_matrix(A), k=0).tocoo()
    frame = pd.DataFrame({'i': U.row, 'j': U.col, 'value': U.data}).sort_values(['i', 'j'])
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f"# {A.shape[0]}\n")
        frame.to_csv(f, sep=' ', header=False, index=False, float_format='%.17g')


def read_matrix(path, size: int = None) -> sp.csr_matrix:
    """
    Reads a symmetric matrix written by write_matrix().

    The size comes from the '# N' header line, the size argument, or the
    largest index, in that order.
    """
    with open(path, 'r', encoding='utf-8') as f:
        first = f.readline().strip()
    if size is None and first.startswith('#'):
        try:
            size = int(first[1:].strip())
        except ValueError:
            size = None
    try:
        frame = pd.read_csv(path, sep=r'\s+', header=None, names=['i', 'j', 'value'], comment='#',
                            float_precision='round_trip')
        i = pd.to_numeric(frame['i']).to_numpy(dtype=int)
        j = pd.to_numeric(frame['j']).to_numpy(dtype=int)
        values = pd.to_numeric(frame['value']).to_numpy(dtype=float)
    except (ValueError, pd.errors.ParserError) as e:
        raise DatasetFormatError(f"could not parse matrix file: {e}", path=path) from e
    if size is None:
        size = int(max(i.max(initial=-1), j.max(initial=-1))) + 1
    off = i != j
    rows = np.concatenate([i, j[off]])
    cols = np.concatenate([j, i[off]])
    data = np.concatenate([values, values[off]])
    return sp.csr_matrix((data, (rows, cols)), shape=(size, size))
