"""Exception hierarchy.

Every error raised by the library derives from :class:`RenyiThermoError`;
most also derive from :class:`ValueError` or :class:`ArithmeticError` so that
callers who only care about the broad category can catch those instead.
"""


class RenyiThermoError(Exception):
    """Base class for all library errors."""


class NotHermitian(RenyiThermoError, ValueError):
    pass


class NotPSD(RenyiThermoError, ValueError):
    pass


class TraceNotOne(RenyiThermoError, ValueError):
    pass


class DimensionMismatch(RenyiThermoError, ValueError):
    pass


class SupportViolation(RenyiThermoError, ArithmeticError):
    """A matrix power or logarithm would leave the support of its argument."""


class NegativeBase(RenyiThermoError, ArithmeticError):
    pass


class CutoffViolation(RenyiThermoError, ArithmeticError):
    """The deformed-logarithm argument ``1 + (alpha-1) beta (U_N - U_T)`` is not positive."""


class NoConvergence(RenyiThermoError, RuntimeError):
    pass


class InfeasibleConstraint(RenyiThermoError, ValueError):
    pass


class MultipleRoots(RenyiThermoError, RuntimeError):
    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class NoBracket(RenyiThermoError, ValueError):
    pass


class NonMonotone(RenyiThermoError, ValueError):
    pass


class CycleNotClosed(RenyiThermoError, RuntimeError):
    pass


class LedgerMismatch(RenyiThermoError, RuntimeError):
    """Path-integrated heat/work ledgers disagree with endpoint state functions."""


class FixedPointMismatch(RenyiThermoError, ValueError):
    pass


class NotCPTP(RenyiThermoError, ValueError):
    pass


class ConfigError(RenyiThermoError, ValueError):
    pass
