"""Exception and warning types raised across the package."""


class CarlemanError(Exception):
    """Base class for all errors raised by this package."""


class GeometryError(CarlemanError):
    pass


class DegenerateParametrizationError(GeometryError):
    pass


class SelfIntersectionError(GeometryError):
    pass


class ShiftError(CarlemanError):
    pass


class InvolutionError(ShiftError):
    def __init__(self, max_deviation, tol):
        self.max_deviation = float(max_deviation)
        self.tol = float(tol)
        super().__init__(
            f"shift is not an involution: max |a(a(t)) - t| = {self.max_deviation:.3e} "
            f"exceeds {self.tol:.1e}")


class NonMonotoneShiftError(ShiftError):
    pass


class ZeroDerivativeError(ShiftError):
    pass


class ExprError(CarlemanError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message, offset, expected=()):
        self.offset = int(offset)
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {self.offset}{detail}")


class NonIntegerExponentError(ExprSyntaxError):
    pass


class ExprDivisionByZeroError(ExprError):
    pass


class UnboundVariableError(ExprError):
    pass


class ResolutionError(CarlemanError):
    """The discretization is too coarse for a reliable answer."""


class ModeMismatchError(CarlemanError):
    pass


class KernelSingularityError(CarlemanError):
    pass


class DivisionError(CarlemanError):
    pass


class ParityError(CarlemanError):
    pass


class SingularNodeError(CarlemanError):
    pass


class NotNoetherianError(CarlemanError):
    pass


class InconclusiveIndexError(CarlemanError):
    pass


class ProblemError(CarlemanError):
    """Invalid problem description; ``pointer`` is a JSON pointer into the input."""

    def __init__(self, message, pointer="", offset=None):
        self.pointer = pointer
        self.offset = offset
        self.reason = message
        super().__init__(f"{pointer or '/'}: {message}")


class BandLimitWarning(UserWarning):
    pass


class UnreliableGapWarning(UserWarning):
    pass
