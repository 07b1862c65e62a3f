"""Exception and warning types shared across the package."""


class FluxmonError(Exception):
    """Base class for all package-specific errors."""


class ConvergenceError(FluxmonError):
    """Eigensolver failed to converge."""


class CutoffError(FluxmonError):
    """Charge-basis cutoff too small: doubling it moved a requested level."""


class DimensionError(FluxmonError):
    """Inconsistent matrix/basis dimensions."""


class MissingLabel(FluxmonError):
    """A requested dressed-state label is truncated or ambiguous."""


class EmptyColumn(FluxmonError):
    """A spectroscopy column has too few frequency samples to search."""


class InsufficientData(FluxmonError):
    """Not enough data points for the requested fit."""


class NoConvergence(FluxmonError):
    """Optimizer hit the iteration limit with the step norm above tolerance."""


class NonDecaying(FluxmonError):
    """Decay fit pinned the time constant at its upper bound."""


class LabelingAmbiguous(UserWarning):
    """Dressed-state label won with overlap weight <= 0.5 (near a crossing)."""


class BoundaryStuck(UserWarning):
    """Fit optimum pinned at a parameter bound."""
