"""Exception hierarchy."""


class OrliczError(Exception):
    """Base class for all library errors."""


class ParameterError(OrliczError, ValueError):
    """Invalid N-function parameters or inputs outside an operation's domain."""


class ConvergenceError(OrliczError, ArithmeticError):
    """An iterative procedure did not reach its tolerance."""


class NoCertificate(OrliczError):
    """No multiplicativity constant in the admissible range works on the grid."""


class DegreeError(OrliczError, ValueError):
    """Polynomial degree incompatible with the requested operation."""


class ConfigError(OrliczError, ValueError):
    """Malformed run configuration or input file."""
