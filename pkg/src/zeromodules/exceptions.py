"""Exception hierarchy shared by all modules."""


class ZeroModuleError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(ZeroModuleError, ValueError):
    pass


class SpectraOverlap(ZeroModuleError):
    """Sylvester/Lyapunov operator is (numerically) singular."""


class RiccatiFailure(ZeroModuleError):
    """The algebraic Riccati solver could not produce a stabilizing solution."""


class ImaginaryAxisEigenvalue(RiccatiFailure):
    pass


class NoStabilizingSolution(RiccatiFailure):
    pass


class PoleHit(ZeroModuleError):
    """Evaluation point coincides with an eigenvalue of A."""


class NotObservable(ZeroModuleError):
    pass


class NotMinimal(ZeroModuleError):
    pass


class InfeasibleColumn(ZeroModuleError):
    """A column of the zero pencil equation could not be solved to tolerance."""


class NotInner(ZeroModuleError):
    pass


class NonRationalEntries(ZeroModuleError, ValueError):
    pass


class SystemParseError(ZeroModuleError, ValueError):
    pass


class HypothesisViolated(ZeroModuleError, UserWarning):
    """Degree-preservation hypotheses fail; results are computed but carry no degree guarantee."""
