"""
Recursive Schur-complement lower bound on the smallest eigenvalue.

At each level a block of r nodes is chosen by breadth-first search, the
block is shifted until positive definite, and the Schur complement of the
shifted block is passed to the next level. By Haynsworth inertia additivity
the accumulated shifts, plus the smallest eigenvalue of the final small
complement, bound lambda_min(L) from below.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .constants import DEFAULT_EPSILON, DENSE_FACTOR, MARGIN_RULES, LOOKAHEAD_RTOL
from .exceptions import InvalidParameterError, NumericalBreakdownError
from .utils import check_square, check_symmetric

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundLevel:
    """One level of the recursion."""
    level: int
    dimension: int
    block: tuple
    lambda1: float
    kappa: float
    margin: float
    boundary_size: int


def bfs_block(A, r: int, start: int) -> np.ndarray:
    """
    The first r nodes discovered by breadth-first search from start.

    Neighbors are visited in ascending id order. When a connected component
    is exhausted before r nodes are found, the search restarts from the
    lowest-id undiscovered node.
    """
    n = A.shape[0]
    r = min(r, n)
    sparse = sp.issparse(A)
    if sparse:
        A = sp.csr_matrix(A)
        A.sort_indices()
    discovered = np.zeros(n, dtype=bool)
    order: List[int] = []
    queue = deque([start])
    discovered[start] = True
    next_unvisited = 0

    while len(order) < r:
        if not queue:
            while discovered[next_unvisited]:
                next_unvisited += 1
            discovered[next_unvisited] = True
            queue.append(next_unvisited)
        u = queue.popleft()
        order.append(u)
        if sparse:
            row = A.indices[A.indptr[u]:A.indptr[u + 1]]
            neighbors = row[A.data[A.indptr[u]:A.indptr[u + 1]] != 0]
        else:
            neighbors = np.flatnonzero(A[u])
        for v in neighbors:
            if not discovered[v]:
                discovered[v] = True
                queue.append(v)
    return np.asarray(order, dtype=int)


def shifted_spectrum(eigenvalues: np.ndarray, delta: float) -> np.ndarray:
    """
    Eigenvalues of A11 - kappa I for kappa = lambda1 - delta, ascending.

    Built from the gaps to lambda1, so the smallest pivot is exactly delta
    however large |lambda1| is.
    """
    return (eigenvalues - eigenvalues[0]) + delta


def lookahead_margin(eigenvalues: np.ndarray, W: np.ndarray, A22_boundary: np.ndarray, floor: float,
                     rtol: float = LOOKAHEAD_RTOL) -> float:
    """
    Smallest delta >= floor that keeps the boundary block of the next complement PSD.

    With kappa = lambda1 - delta that block is
    S(delta) = A22_bb + (delta - lambda1) I - W^T diag(1 / (lambda_i - lambda1 + delta)) W,
    where W = V^T A12_b. lambda_min(S(delta)) grows at least as fast as delta,
    so the root is bracketed by [floor, floor - lambda_min(S(floor))] and
    found by bisection. Returns floor when S(floor) is PSD to within
    rtol * floor.

    Args:
        eigenvalues (np.ndarray): Ascending eigenvalues of the block A11
        W (np.ndarray): Block eigenvectors applied to the boundary columns, r x b
        A22_boundary (np.ndarray): Boundary rows and columns of the remaining matrix, b x b
        floor (float): Smallest admissible delta, positive
        rtol (float): Relative width of the final bracket
    """
    if W.shape[1] == 0:
        return floor
    gaps = eigenvalues - eigenvalues[0]
    identity = np.eye(W.shape[1])

    def smallest(delta: float) -> float:
        S = A22_boundary + (delta - eigenvalues[0]) * identity - W.T @ (W / (gaps + delta)[:, None])
        return float(la.eigvalsh(0.5 * (S + S.T), subset_by_index=[0, 0])[0])

    low = floor
    lowest = smallest(low)
    if lowest >= -rtol * low:
        return floor
    high = low - lowest
    while high - low > rtol * high:
        middle = 0.5 * (low + high)
        if smallest(middle) >= 0.0:
            high = middle
        else:
            low = middle
    return high


def eval_bound(L, r: int, epsilon: float = DEFAULT_EPSILON, seed: int = 0, margin: str = 'fixed',
               trace: Optional[list] = None) -> float:
    """
    Lower bound on lambda_min(L) by recursive Schur complements.

    Each level picks r nodes by BFS from a seeded random start and
    eigendecomposes the r x r block. If lambda1 <= 0 it sets
    kappa = lambda1 - delta (else kappa = 0), shifts the remaining matrix by
    -kappa and forms the Schur complement of the shifted block. When the
    complement has at most r rows the result is the sum of all kappa plus
    min(lambda_min(complement), 0).

    Any delta > 0 keeps the bound sound. A small fixed delta adds about
    -||L12^T v1||^2 / delta to the next complement, so the bound can be far
    below lambda_min once a level shifts. The lookahead rule picks delta
    from that complement instead; it also shifts a block with lambda1 > 0
    when the unshifted complement would be indefinite on the boundary.

    Args:
        L: Symmetric matrix, dense or sparse
        r (int): Block size, the largest matrix ever eigendecomposed
        epsilon (float): Margin of the fixed rule, smallest margin of the lookahead rule
        seed (int): Seed of the BFS start nodes
        margin (str): 'fixed' (default) uses delta = epsilon. 'lookahead' uses the smallest
            delta >= epsilon (>= lambda1 for a PD block) keeping the next boundary block PSD,
            see lookahead_margin()
        trace (list, optional): Receives one BoundLevel per level

    Returns:
        float: A value <= lambda_min(L)

    Raises:
        NumericalBreakdownError: If an intermediate complement overflows
    """
    if int(r) != r or r < 1:
        raise InvalidParameterError(f"block size r must be a positive integer, got {r}")
    if not epsilon > 0:
        raise InvalidParameterError(f"epsilon must be positive, got {epsilon}")
    if margin not in MARGIN_RULES:
        raise InvalidParameterError(f"margin must be one of {MARGIN_RULES}, got '{margin}'")
    r = int(r)
    check_square(L)
    check_symmetric(L)

    n = L.shape[0]
    if n <= r:
        return min(float(la.eigvalsh(_dense(L))[0]), 0.0)

    rng = np.random.default_rng(seed)
    current = sp.csr_matrix(L, dtype=float) if n > DENSE_FACTOR * r else _dense(L)
    total = 0.0
    level = 0

    while True:
        n = current.shape[0]
        block = bfs_block(current, r, int(rng.integers(n)))
        in_block = np.zeros(n, dtype=bool)
        in_block[block] = True
        rest = np.flatnonzero(~in_block)

        if sp.issparse(current):
            rows = current[block]
            A11 = rows[:, block].toarray()
            A12 = rows[:, rest].tocsc()
            A22 = current[rest][:, rest]
            boundary = np.flatnonzero(np.diff(A12.indptr))
            A12_boundary = A12[:, boundary].toarray()
        else:
            A11 = current[np.ix_(block, block)]
            A12_full = current[np.ix_(block, rest)]
            A22 = current[np.ix_(rest, rest)]
            boundary = np.flatnonzero(np.any(A12_full != 0, axis=0))
            A12_boundary = A12_full[:, boundary]

        eigenvalues, eigenvectors = la.eigh(0.5 * (A11 + A11.T))
        lambda1 = float(eigenvalues[0])
        W = eigenvectors.T @ A12_boundary
        if margin == 'fixed':
            delta = epsilon if lambda1 <= 0.0 else 0.0
        else:
            # delta = lambda1 > 0 leaves the block unshifted
            floor = epsilon if lambda1 <= 0.0 else lambda1
            A22_boundary = (A22[boundary][:, boundary].toarray() if sp.issparse(A22)
                            else A22[np.ix_(boundary, boundary)])
            delta = lookahead_margin(eigenvalues, W, A22_boundary, floor)
            if lambda1 > 0.0 and delta == lambda1:
                delta = 0.0
        if delta > 0.0:
            kappa = lambda1 - delta
            pivots = shifted_spectrum(eigenvalues, delta)
        else:
            kappa = 0.0
            pivots = eigenvalues

        # A12^T (A11 - kappa I)^{-1} A12 on the boundary columns
        correction = W.T @ (W / pivots[:, None])
        correction = 0.5 * (correction + correction.T)
        if not (np.isfinite(kappa) and np.all(np.isfinite(correction))):
            raise NumericalBreakdownError('eval_bound', level)

        m = rest.size
        if trace is not None:
            trace.append(BoundLevel(level, n, tuple(int(b) for b in block), lambda1, kappa, delta, int(boundary.size)))
        logger.debug("eval_bound level %d: dim=%d lambda1=%.6g kappa=%.6g delta=%.3g boundary=%d",
                     level, n, lambda1, kappa, delta, boundary.size)

        if sp.issparse(A22):
            S = A22 - sp.csr_matrix(
                (correction.ravel(), (np.repeat(boundary, boundary.size), np.tile(boundary, boundary.size))),
                shape=(m, m))
            if kappa != 0.0:
                S = S - kappa * sp.identity(m, format='csr')
            S = S.tocsr()
            S.eliminate_zeros()
            if m <= DENSE_FACTOR * r:
                S = _dense(S)
        else:
            S = A22.copy()
            S[np.ix_(boundary, boundary)] -= correction
            if kappa != 0.0:
                S[np.diag_indices(m)] -= kappa

        if not np.all(np.isfinite(S.data if sp.issparse(S) else S)):
            raise NumericalBreakdownError('eval_bound', level)

        if m <= r:
            lambda2 = float(la.eigvalsh(_dense(S))[0])
            bound = total + kappa + min(lambda2, 0.0)
            if not np.isfinite(bound):
                raise NumericalBreakdownError('eval_bound', level)
            return bound

        total += kappa
        current = S
        level += 1


def _dense(A) -> np.ndarray:
    dense = A.toarray() if sp.issparse(A) else np.array(A, dtype=float)
    return 0.5 * (dense + dense.T)
