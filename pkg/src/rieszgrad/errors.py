"""Exception hierarchy shared by all modules."""


class RieszError(Exception):
    """Base class for every error raised by rieszgrad."""


class DomainError(RieszError, ValueError):
    """An argument lies outside the domain where a function is defined."""


class InvalidParams(DomainError):
    """Hypergeometric parameters are degenerate (c a nonpositive integer)."""


class RangeError(RieszError, ValueError):
    """The order alpha is outside the supported range (0, 2]."""


class NonConvergent(RieszError, ArithmeticError):
    """A series or quadrature failed to reach tolerance within its budget."""


class ConvergenceError(NonConvergent):
    """Root bracketing or root refinement failed."""


class AdmissibilityError(RieszError, ValueError):
    """A density violates 0 <= rho <= 1 or touches the origin."""


class SupportError(RieszError, ValueError):
    """An evaluation point lies inside or on the support of a density."""


class DimensionError(RieszError, ValueError):
    """The ambient dimension does not support the requested quantity."""


class MissingMoment(RieszError, KeyError):
    """A moment index required by a computation is absent."""


class InsufficientData(RieszError, ValueError):
    """Too few entries were supplied for the requested determinant order."""


class Infeasible(RieszError, ValueError):
    """The discretized linear program has no feasible point."""


class UnknownSuite(RieszError, KeyError):
    """No verification suite is registered under the given name."""


class DensityFileError(RieszError, ValueError):
    """A density file failed to parse or validate.

    ``line`` is the 1-based line of the offending node when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
