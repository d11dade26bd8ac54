"""Exception hierarchy shared by all modules."""


class SusyError(Exception):
    """Base class for every error raised by this package."""


class ConvergenceError(SusyError):
    """A series failed to converge within the allowed number of terms."""


class PoleError(SusyError, ValueError):
    """A Gamma function argument hit a pole."""


class NodeError(SusyError):
    """A seed solution or Wronskian vanishes (singular transformation)."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class ChainError(SusyError, ValueError):
    """Invalid SUSY chain parameters."""


class TruncationError(SusyError):
    """Ladder truncation left too much probability in the tail."""


class NonCyclicError(SusyError, ValueError):
    """A phase was requested for a state that is not cyclic under the loop."""


class RationalMismatchError(SusyError, ValueError):
    """Declared exact factorization energies disagree with the stored floats."""


class ConsistencyError(SusyError):
    """Two independent evaluations of the same quantity disagree."""
