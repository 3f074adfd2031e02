"""Exception hierarchy for signedgraphpy.

Every error raised on purpose by the library derives from SignedGraphError,
which itself is a ValueError, so ``except ValueError`` keeps working.
"""

from typing import Optional


class SignedGraphError(ValueError):
    """Base class for all signedgraphpy errors."""


class InvalidParameterError(SignedGraphError):
    """A configuration value or argument is outside its allowed range."""


class DegenerateClusteringError(SignedGraphError):
    """Raised when the labels contain only one class."""
    def __init__(self, present_label=None):
        label_text = f" (only label {present_label} found)" if present_label is not None else ""
        super().__init__(
            f"Both classes must be represented among the labeled nodes{label_text}. "
            "Centroid and boundary pairs need at least one -1 and one +1 label.\n"
            "To resolve this, you can try:\n"
            "1. Increase the training fraction so both classes are sampled\n"
            "2. Use method GraphPos, which does not build negative edges"
        )


class InvalidEdgeError(SignedGraphError):
    """An edge is a self-loop or references a node outside the graph."""


class DimensionMismatchError(SignedGraphError):
    """Two operands have incompatible shapes."""


class NonSymmetricMatrixError(SignedGraphError):
    """A matrix that must be symmetric is not."""
    def __init__(self, asymmetry: float, tolerance: float):
        self.asymmetry = asymmetry
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not symmetric: max |A - A^T| = {asymmetry:.3e} exceeds tolerance {tolerance:.3e}."
        )


class SingularBlockError(SignedGraphError):
    """The leading block of a Schur complement is singular."""


class SingularSystemError(SignedGraphError):
    """Raised when the IRLS linear system cannot have a unique solution."""
    def __init__(self, n_labels: int, n_nodes: int):
        super().__init__(
            f"The restoration system is singular: only {n_labels} of {n_nodes} nodes are labeled "
            "and both mu1 and mu2 are zero, so unlabeled nodes are unconstrained.\n"
            "To resolve this, you can try:\n"
            "1. Set mu1 > 0 (e.g. SolverConfig(mu1=0.01))\n"
            "2. Set mu2 > 0 to add the generalized smoothness prior"
        )


class InvalidOperatorError(SignedGraphError):
    """An operator has structure inconsistent with its role."""


class DatasetFormatError(SignedGraphError):
    """A dataset file could not be parsed."""
    def __init__(self, message: str, line_number: Optional[int] = None, path=None):
        self.line_number = line_number
        self.path = path
        location = ""
        if path is not None:
            location += f"{path}"
        if line_number is not None:
            location += f"{':' if location else 'line '}{line_number}"
        super().__init__(f"{location}: {message}" if location else message)


class BoundSoundnessError(SignedGraphError):
    """A computed lower bound exceeds the true smallest eigenvalue."""
    def __init__(self, bound_name: str, bound: float, oracle: float, trial=None):
        self.bound_name = bound_name
        self.bound = bound
        self.oracle = oracle
        trial_text = f" in trial {trial}" if trial is not None else ""
        super().__init__(
            f"Lower bound '{bound_name}' = {bound:.12g} exceeds the smallest eigenvalue "
            f"{oracle:.12g}{trial_text}. This indicates an implementation bug, please report it."
        )


class NumericalBreakdownError(SignedGraphError):
    """An intermediate result left the finite floating-point range."""
    def __init__(self, where: str, level: Optional[int] = None):
        level_text = f" at level {level}" if level is not None else ""
        super().__init__(
            f"{where} produced a non-finite value{level_text}.\n"
            "To resolve this, you can try:\n"
            "1. Use margin='lookahead', which keeps each shifted pivot away from the coupling it divides\n"
            "2. Increase epsilon or the block size r"
        )
