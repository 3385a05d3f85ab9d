"""Exception hierarchy shared by all modules."""


class StableWaveletError(Exception):
    """Base class for all package errors."""


class ParameterError(StableWaveletError, ValueError):
    """A parameter lies outside its admissible range."""


class ShapeError(StableWaveletError, ValueError):
    """Inputs have incompatible shapes or index sets."""


class DomainError(StableWaveletError, ValueError):
    """A function is evaluated outside its domain."""


class SingularityError(DomainError):
    """A formula is evaluated at a point where it diverges."""

    def __init__(self, message, atom=None):
        super().__init__(message)
        self.atom = atom


class ConfigurationError(StableWaveletError, ValueError):
    """A run or synthesis configuration is inconsistent."""


class DataError(StableWaveletError, ValueError):
    """Input data cannot be processed (zeros in a log, non-finite values, ...)."""


class DiagnosticsError(StableWaveletError, RuntimeError):
    """A numerical diagnostic cannot be computed reliably."""


class HypothesisError(StableWaveletError, ValueError):
    """The hypotheses of a verification check are not met."""
