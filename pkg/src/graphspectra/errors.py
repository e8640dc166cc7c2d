"""Exception hierarchy.

Every error raised by the package derives from :class:`GraphSpectraError`.
The three intermediate classes map onto CLI exit codes (config -> 2,
data -> 3, numerical -> 4).
"""


class GraphSpectraError(Exception):
    pass


class ConfigError(GraphSpectraError, ValueError):
    pass


class DataError(GraphSpectraError, ValueError):
    pass


class NumericalError(GraphSpectraError, ArithmeticError):
    pass


# graph construction / loading
class SelfLoop(DataError):
    pass


class IndexOutOfRange(DataError, IndexError):
    pass


class NegativeWeight(DataError):
    pass


class DuplicateEdge(DataError):
    pass


class AsymmetricWeight(DataError):
    pass


class ParseError(DataError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IsolatedVertex(DataError):
    pass


class Disconnected(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class DegenerateSignal(DataError):
    pass


class ZeroSignal(DataError):
    pass


class DomainMismatch(DataError):
    pass


# parameter validation
class TooLarge(ConfigError):
    pass


class DegreeTooLarge(ConfigError):
    pass


class InvalidParameters(ConfigError):
    pass


class InvalidOrder(ConfigError):
    pass


class InvalidWarp(ConfigError):
    pass


class InvalidPivot(ConfigError):
    pass


class InvalidDensity(ConfigError):
    pass


class NonMonotoneInput(ConfigError):
    pass


class DuplicateAbscissa(ConfigError):
    pass


class NotParseval(ConfigError):
    pass


# numerics
class NoConvergence(NumericalError):
    pass


class NonMonotoneESD(NumericalError):
    pass


class OutOfDomain(NumericalError, ValueError):
    pass
