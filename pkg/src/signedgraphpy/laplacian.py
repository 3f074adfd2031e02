from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import DimensionMismatchError, InvalidParameterError
from .graph import SignedGraph


def laplacian_of(W) -> sp.csr_matrix:
    """Combinatorial Laplacian diag(W 1) - W of a symmetric weight matrix."""
    W = sp.csr_matrix(W, dtype=float)
    degrees = np.asarray(W.sum(axis=1)).ravel()
    L = (sp.diags(degrees) - W).tocsr()
    L.sort_indices()
    return L


@dataclass(frozen=True)
class LaplacianBundle:
    """
    All Laplacian variants of a signed graph, as CSR matrices.

    Attributes:
        W: weight matrix
        L: D - W, degrees include negative weights
        L_pos: Laplacian of the positive-weight subgraph
        L_neg: Laplacian of the negative-weight subgraph (negative semi-definite)
        L_signed: diag(|W| 1) - W
    """
    W: sp.csr_matrix
    L: sp.csr_matrix
    L_pos: sp.csr_matrix
    L_neg: sp.csr_matrix
    L_signed: sp.csr_matrix

    @property
    def node_count(self) -> int:
        return self.L.shape[0]

    @property
    def has_negative_edges(self) -> bool:
        return bool(np.any(self.W.data < 0))

    def __repr__(self):
        return f"LaplacianBundle(node_count={self.node_count}, has_negative_edges={self.has_negative_edges})"


def build_laplacian(graph: SignedGraph) -> LaplacianBundle:
    W = graph.weight_matrix()
    W_pos = W.multiply(W > 0).tocsr()
    W_neg = W.multiply(W < 0).tocsr()
    abs_degrees = np.asarray(abs(W).sum(axis=1)).ravel()
    L_signed = (sp.diags(abs_degrees) - W).tocsr()
    L_signed.sort_indices()
    return LaplacianBundle(
        W=W,
        L=laplacian_of(W),
        L_pos=laplacian_of(W_pos),
        L_neg=laplacian_of(W_neg),
        L_signed=L_signed,
    )


def combine_laplacians(Lg1, Lg2, beta: float):
    """
    Convex combination beta * Lg1 + (1 - beta) * Lg2.

    The endpoints return the corresponding operand unchanged. The result is
    sparse only when both operands are sparse.
    """
    if Lg1.shape != Lg2.shape:
        raise DimensionMismatchError(f"cannot combine Laplacians of shapes {Lg1.shape} and {Lg2.shape}")
    if not (0.0 <= beta <= 1.0):
        raise InvalidParameterError(f"beta must lie in [0, 1], got {beta}")
    if beta == 1.0:
        return Lg1
    if beta == 0.0:
        return Lg2
    if sp.issparse(Lg1) and sp.issparse(Lg2):
        return (beta * Lg1 + (1.0 - beta) * Lg2).tocsr()
    dense1 = Lg1.toarray() if sp.issparse(Lg1) else np.asarray(Lg1, dtype=float)
    dense2 = Lg2.toarray() if sp.issparse(Lg2) else np.asarray(Lg2, dtype=float)
    return beta * dense1 + (1.0 - beta) * dense2
