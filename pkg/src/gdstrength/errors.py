"""Exception types shared across the package."""


class UnphysicalStateError(ValueError):
    """Raised when a covariance matrix violates the bosonic uncertainty bound."""


class InvalidLambdaError(ValueError):
    """Raised when a phase-rotation angle is an integer multiple of 2*pi.

    Such rotations act trivially on every state, so no correlation measure
    can be built from them.
    """


class DecompositionError(ValueError):
    """Raised when a matrix decomposition receives an input outside its domain."""
