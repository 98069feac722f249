"""Exception types shared across the package."""


class StarErgodicError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(StarErgodicError, ValueError):
    """An operation was called with arguments outside its domain."""


class KindMismatchError(PreconditionError):
    """Elements, states or maps belong to different algebras."""


class InvalidSystemError(StarErgodicError):
    """A system failed validation (state, unit preservation or contraction)."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class HypothesisError(StarErgodicError):
    """A theorem was invoked on a system that does not meet its hypothesis."""


class ConsistencyError(StarErgodicError):
    """Two routes that must agree did not; indicates a bug or ill-conditioning."""


class ConvergenceError(StarErgodicError):
    """An averaging search exhausted its budget."""

    def __init__(self, message, best_residual=None, n_tried=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.n_tried = n_tried
