"""Exception hierarchy shared by every module."""


class CyclothetaError(Exception):
    """Base class for all library errors."""


class ParameterError(CyclothetaError, ValueError):
    """An argument is outside the domain of the operation."""


class NonInvertibleError(CyclothetaError, ArithmeticError):
    """A residue class is not a unit modulo the requested modulus."""


class ConsistencyError(CyclothetaError):
    """An identity that must hold exactly was violated (basis or convention bug)."""


class UnsupportedParametersError(ParameterError):
    """The parameters fall outside the hypotheses under which a result applies."""


class HypothesisNotMetError(UnsupportedParametersError):
    """A hypothesis of the underlying statement (e.g. p not dividing det A) fails for these inputs."""


class PrecisionExhaustedError(CyclothetaError):
    """The working precision was not enough to certify the result."""


class DomainError(CyclothetaError, ValueError):
    """A point is not certified to lie in the Siegel upper half-space."""


class PoleOrPrecisionError(PrecisionExhaustedError):
    """|theta(0,z;0,0)| could not be separated from zero at the working precision."""


class InconclusiveError(PrecisionExhaustedError):
    """Two orbit conjugates could not be told apart within the certified error."""
