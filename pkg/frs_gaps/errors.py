"""Exception hierarchy for frs-gaps."""


class FRSError(Exception):
    """Base class for every error raised by the package."""


class DivisionByZero(FRSError, ZeroDivisionError):
    """Inversion of the zero field element."""


class ContextMismatch(FRSError, ValueError):
    """Operands belong to different field contexts."""


class NotPrime(FRSError, ValueError):
    """Field modulus failed the primality check."""


class ShapeError(FRSError, ValueError):
    """Vector, word or matrix dimensions do not line up."""


class DuplicateNode(FRSError, ValueError):
    """Interpolation nodes are not pairwise distinct."""


class ParameterError(FRSError, ValueError):
    """Code parameters violate the folded Reed-Solomon definition."""


class OrderTooSmall(ParameterError):
    pass


class PointCollision(ParameterError):
    pass


class DegreeOverflow(ParameterError):
    pass


class FieldTooSmall(ParameterError):
    pass


class InvalidBasepoint(ParameterError):
    pass


class EnumerationTooLarge(FRSError):
    """A brute-force loop would exceed the configured enumeration cap."""


class DesignPreconditionViolated(FRSError, ValueError):
    pass


class ZeroPolynomial(FRSError, ValueError):
    pass


class InterpolationInfeasible(FRSError):
    """The decoder's interpolation system has no nonzero solution."""


class DegenerateSubspace(FRSError):
    """Every coordinate kernel equals a nonzero subspace; cannot happen for valid input."""


class PreconditionFailed(FRSError, ValueError):
    pass


class ClusterTooLarge(FRSError):
    """Chosen near-codewords span an affine subspace of dimension above r."""


class StitchFailed(FRSError):
    """Pin sampling retry budget exhausted without a large enough matched set."""


class NotACodeword(FRSError, ValueError):
    pass


class InvariantViolation(FRSError, AssertionError):
    """A proven inequality or identity failed at runtime."""


class ConfigError(FRSError, ValueError):
    pass
