"""
MAP restoration of the classifier signal.

The objective sum_i b_i (y_i - x_idx(i))^2 + mu1 x^T Lg x + mu2 x^T (L+)^2 x
is minimized by iteratively reweighted least squares; each reweighted
quadratic is solved by Jacobi-preconditioned conjugate gradient.
"""

import logging
from dataclasses import dataclass, asdict, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg

from .constants import (
    DEFAULT_MU1, DEFAULT_MU2, DEFAULT_IRLS_EPSILON, DEFAULT_MAX_OUTER_ITER, DEFAULT_OUTER_TOL,
    DEFAULT_CG_TOL, DEFAULT_CG_MAX_ITER, DEFAULT_BETA_SCHEDULE,
)
from .exceptions import InvalidParameterError, SingularSystemError, DimensionMismatchError
from .features import PartialLabels

logger = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    """
    Restoration parameters.

    Attributes:
        mu1: weight of the graph smoothness prior x^T Lg x
        mu2: weight of the generalized smoothness prior x^T (L+)^2 x
        irls_epsilon: epsilon in the weight update b = 1 / (r^2 + epsilon)
        max_outer_iter: IRLS iteration cap
        outer_tol: IRLS stops when max |x_new - x_old| drops below this
        cg_tol: relative residual tolerance of each CG solve
        cg_max_iter: CG iteration cap
        reject_threshold: tau, values with |x| <= tau are rejected
        beta_schedule: beta per stage of the hybrid method, from 1 down to 0
        reject_target: if set, tau is tuned so about this fraction of unlabeled nodes is rejected
    """
    mu1: float = DEFAULT_MU1
    mu2: float = DEFAULT_MU2
    irls_epsilon: float = DEFAULT_IRLS_EPSILON
    max_outer_iter: int = DEFAULT_MAX_OUTER_ITER
    outer_tol: float = DEFAULT_OUTER_TOL
    cg_tol: float = DEFAULT_CG_TOL
    cg_max_iter: int = DEFAULT_CG_MAX_ITER
    reject_threshold: float = 0.0
    beta_schedule: Tuple[float, ...] = DEFAULT_BETA_SCHEDULE
    reject_target: Optional[float] = None

    def __post_init__(self):
        self.beta_schedule = tuple(float(b) for b in self.beta_schedule)
        if self.mu1 < 0 or self.mu2 < 0:
            raise InvalidParameterError(f"mu1 and mu2 must be non-negative, got {self.mu1}, {self.mu2}")
        if not self.irls_epsilon > 0:
            raise InvalidParameterError(f"irls_epsilon must be positive, got {self.irls_epsilon}")
        if self.max_outer_iter < 1 or self.cg_max_iter < 1:
            raise InvalidParameterError("iteration caps must be positive")
        if not (self.outer_tol > 0 and self.cg_tol > 0):
            raise InvalidParameterError("tolerances must be positive")
        if self.reject_threshold < 0:
            raise InvalidParameterError(f"reject_threshold must be non-negative, got {self.reject_threshold}")
        if not self.beta_schedule:
            raise InvalidParameterError("beta_schedule must not be empty")
        if any(not (0.0 <= b <= 1.0) for b in self.beta_schedule):
            raise InvalidParameterError(f"beta values must lie in [0, 1], got {self.beta_schedule}")
        if any(a < b for a, b in zip(self.beta_schedule, self.beta_schedule[1:])):
            raise InvalidParameterError(f"beta_schedule must be non-increasing, got {self.beta_schedule}")
        if self.reject_target is not None and not (0.0 <= self.reject_target < 1.0):
            raise InvalidParameterError(f"reject_target must lie in [0, 1), got {self.reject_target}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'SolverConfig':
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass
class CGResult:
    x: np.ndarray
    converged: bool
    iterations: int
    residual_norm: float


@dataclass
class IrlsState:
    """IRLS weights (diagonal of B, one per label) and the current signal."""
    weights: np.ndarray
    signal: np.ndarray


@dataclass
class IrlsIteration:
    iteration: int
    objective_before: float
    objective_after: float
    step: float
    cg_iterations: int
    cg_converged: bool


@dataclass
class ClassifierSignal:
    """
    Restored signal with ternary decisions (-1, 0 = reject, +1).
    """
    values: np.ndarray
    decisions: np.ndarray
    iterations: int
    final_objective: float
    converged: bool
    weights: np.ndarray = None
    threshold: float = 0.0
    history: List[IrlsIteration] = field(default_factory=list, repr=False)

    @property
    def rejection_rate(self) -> float:
        return float(np.mean(self.decisions == 0)) if self.decisions.size else 0.0

    def to_dict(self, config=None) -> dict:
        data = {
            'values': self.values.tolist(),
            'decisions': self.decisions.astype(int).tolist(),
            'iterations': int(self.iterations),
            'finalObjective': float(self.final_objective),
            'rejectionRate': self.rejection_rate,
            'converged': bool(self.converged),
            'threshold': float(self.threshold),
        }
        if config is not None:
            data['config'] = config
        return data

    def brief_summary(self) -> str:
        counts = {d: int(np.sum(self.decisions == d)) for d in (-1, 0, 1)}
        return (f"[{len(self.values)} nodes] +1: {counts[1]}, -1: {counts[-1]}, rejected: {counts[0]} "
                f"({self.iterations} iterations{'' if self.converged else ', not converged'})")


def classify(values, tau: float = 0.0) -> np.ndarray:
    """
    +1 where value > tau, -1 where value < -tau, 0 (reject) otherwise.
    """
    if tau < 0:
        raise InvalidParameterError(f"tau must be non-negative, got {tau}")
    values = np.asarray(values, dtype=float)
    return np.where(values > tau, 1, np.where(values < -tau, -1, 0)).astype(int)


def tune_threshold(values, target_rate: float) -> float:
    """
    Threshold tau that rejects about target_rate of the given values.

    tau is the target_rate quantile of |values|; with ties the realized rate can be higher.
    """
    if not (0.0 <= target_rate < 1.0):
        raise InvalidParameterError(f"target_rate must lie in [0, 1), got {target_rate}")
    magnitudes = np.abs(np.asarray(values, dtype=float))
    if target_rate == 0.0 or magnitudes.size == 0:
        return 0.0
    return float(np.quantile(magnitudes, target_rate, method='lower'))


def cg_solve(A, b, x0=None, tol: float = DEFAULT_CG_TOL, max_iter: int = DEFAULT_CG_MAX_ITER) -> CGResult:
    """
    Solves A x = b for symmetric PSD A with Jacobi-preconditioned CG.

    Args:
        A: Symmetric PSD matrix, dense or sparse
        b (array-like): Right-hand side
        x0 (array-like, optional): Starting point, zeros by default
        tol (float): Relative residual tolerance ||A x - b|| <= tol * ||b||
        max_iter (int): Iteration cap

    Returns:
        CGResult: Solution and convergence information; not converged is flagged, not raised
    """
    b = np.asarray(b, dtype=float).ravel()
    n = b.size
    if A.shape != (n, n):
        raise DimensionMismatchError(f"matrix of shape {A.shape} does not match right-hand side of length {n}")
    diagonal = A.diagonal() if sp.issparse(A) else np.diag(np.asarray(A)).copy()
    diagonal = np.where(diagonal > 0, diagonal, 1.0)
    preconditioner = LinearOperator((n, n), matvec=lambda v: v / diagonal, dtype=float)

    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    x, info = cg(A, b, x0=x0, rtol=tol, atol=0.0, maxiter=max_iter, M=preconditioner, callback=count)
    residual_norm = float(np.linalg.norm(b - A @ x))
    converged = info == 0
    if not converged:
        logger.warning("CG did not converge in %d iterations (relative residual %.3e)",
                       max_iter, residual_norm / max(np.linalg.norm(b), np.finfo(float).tiny))
    return CGResult(x, converged, iterations, residual_norm)


def restoration_prior(Lg, Gsq, config: SolverConfig) -> sp.csr_matrix:
    """mu1 Lg + mu2 Gsq; the Gsq term is dropped when Gsq is None or mu2 = 0."""
    prior = sp.csr_matrix(Lg, dtype=float) * config.mu1
    if Gsq is not None and config.mu2 > 0:
        prior = prior + config.mu2 * sp.csr_matrix(Gsq, dtype=float)
    return prior.tocsr()


def restoration_system(prior, weights, labels: PartialLabels) -> sp.csr_matrix:
    """H^T B H + prior, the matrix of one reweighted least-squares solve."""
    n, indices = labels.node_count, labels.indices
    fidelity = sp.csr_matrix((np.asarray(weights, dtype=float), (indices, indices)), shape=(n, n))
    return (fidelity + prior).tocsr()


def _surrogate_objective(x, weights, labels: PartialLabels, prior) -> float:
    residual = labels.labels - x[labels.indices]
    return float(weights @ (residual * residual) + x @ (prior @ x))


def irls_solve(Lg, Gsq, labels: PartialLabels, config: SolverConfig = None, x0=None) -> ClassifierSignal:
    """
    Restores the classifier signal from noisy partial labels.

    Alternates the CG solve of (H^T B H + mu1 Lg + mu2 Gsq) x = H^T B y, warm
    started from the previous iterate, with the weight update
    b_i = 1 / ((y_i - x_idx(i))^2 + epsilon). Starts from x = H^T y, B = I.

    Args:
        Lg: PSD graph Laplacian (perturbed or positive-only)
        Gsq: (L+)^2 or None when mu2 is not used
        labels (PartialLabels): Observed labels, K >= 1
        config (SolverConfig): Restoration parameters
        x0 (array-like, optional): Starting signal instead of H^T y

    Returns:
        ClassifierSignal: Signal, decisions and IRLS history

    Raises:
        SingularSystemError: If mu1 = mu2 = 0 while some nodes are unlabeled
    """
    config = config or SolverConfig()
    n, k = labels.node_count, labels.count
    if k < 1:
        raise InvalidParameterError("at least one observed label is required")
    if Lg.shape != (n, n):
        raise DimensionMismatchError(f"Lg has shape {Lg.shape}, expected ({n}, {n})")
    if Gsq is not None and Gsq.shape != (n, n):
        raise DimensionMismatchError(f"Gsq has shape {Gsq.shape}, expected ({n}, {n})")
    if config.mu1 == 0 and (config.mu2 == 0 or Gsq is None) and k < n:
        raise SingularSystemError(k, n)

    prior = restoration_prior(Lg, Gsq, config)
    indices, y = labels.indices, labels.labels
    state = IrlsState(weights=np.ones(k), signal=labels.scatter() if x0 is None else np.array(x0, dtype=float))
    history: List[IrlsIteration] = []
    converged = False

    for iteration in range(1, config.max_outer_iter + 1):
        rhs = np.zeros(n)
        rhs[indices] = state.weights * y
        before = _surrogate_objective(state.signal, state.weights, labels, prior)

        system = restoration_system(prior, state.weights, labels)
        result = cg_solve(system, rhs, x0=state.signal, tol=config.cg_tol, max_iter=config.cg_max_iter)
        after = _surrogate_objective(result.x, state.weights, labels, prior)
        step = float(np.max(np.abs(result.x - state.signal)))
        history.append(IrlsIteration(iteration, before, after, step, result.iterations, result.converged))
        logger.debug("IRLS iteration %d: objective %.6g -> %.6g, step %.3e, %d CG iterations",
                     iteration, before, after, step, result.iterations)

        residual = y - result.x[indices]
        state = IrlsState(weights=1.0 / (residual * residual + config.irls_epsilon), signal=result.x)
        if step < config.outer_tol:
            converged = result.converged
            break
    else:
        logger.warning("IRLS did not converge in %d iterations (last step %.3e)", config.max_outer_iter, step)

    values = state.signal
    threshold = config.reject_threshold
    if config.reject_target is not None:
        unlabeled = np.ones(n, dtype=bool)
        unlabeled[indices] = False
        threshold = tune_threshold(values[unlabeled] if unlabeled.any() else values, config.reject_target)

    return ClassifierSignal(
        values=values,
        decisions=classify(values, threshold),
        iterations=len(history),
        final_objective=history[-1].objective_after,
        converged=converged,
        weights=state.weights,
        threshold=threshold,
        history=history,
    )
