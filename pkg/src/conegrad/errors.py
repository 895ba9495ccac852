"""Exception hierarchy shared by all conegrad modules."""


class ConeGradError(ValueError):
    """Base class for every error raised by conegrad."""


class DimensionMismatch(ConeGradError):
    pass


class EmptyGeneratorList(ConeGradError):
    pass


class ZeroGenerator(ConeGradError):
    pass


class NotFullDimensionalDual(ConeGradError):
    """Dual generators do not span R^m, so the ordering cone is not pointed."""


class DualNotPointed(ConeGradError):
    """Zero lies in the hull of the dual generators, so int(K) is empty."""


class EmptyList(ConeGradError):
    pass


class InvalidSet(ConeGradError):
    pass


class InfeasibleBasePoint(ConeGradError):
    pass


class InfeasibleDirection(ConeGradError):
    pass


class ExprSyntaxError(ConeGradError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifier(ConeGradError):
    def __init__(self, name):
        super().__init__(f"unknown identifier {name!r}")
        self.name = name


class ArityError(ConeGradError):
    pass


class EvalDomainError(ConeGradError):
    pass


class NonFiniteResult(ConeGradError):
    pass


class NotFound(ConeGradError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class ScaleTooLarge(ConeGradError):
    pass


class InvalidConfig(ConeGradError):
    pass


class InfeasibleStart(ConeGradError):
    pass


class BacktrackExhausted(ConeGradError):
    def __init__(self, max_backtracks):
        super().__init__(f"Armijo backtracking exhausted after {max_backtracks} reductions")
        self.max_backtracks = max_backtracks


class NotInT(ConeGradError):
    """Candidate point is not K-dominated by the iterate with index ``k``."""

    def __init__(self, k):
        super().__init__(f"candidate is not in the target set: F(x_hat) not <=_K F(x^{k})")
        self.k = k


class UnsupportedSampling(ConeGradError):
    pass


class ProblemFileError(ConeGradError):
    pass
