"""Exception types raised across the package."""


class EntDistError(ValueError):
    """Base class for all input/contract errors."""


class NotSquare(EntDistError):
    pass


class NotHermitian(EntDistError):
    pass


class NegativeEigenvalue(EntDistError):
    pass


class DimensionMismatch(EntDistError):
    pass


class InvalidState(EntDistError):
    """Matrix is not a valid density matrix (trace, Hermiticity or positivity)."""


class NotNormalized(EntDistError):
    pass


class InvalidWeights(EntDistError):
    pass


class OutOfRange(EntDistError):
    pass


class NotBipartite(EntDistError):
    pass


class NotTwoQubits(EntDistError):
    pass


class IncompletePOVM(EntDistError):
    pass


class InvalidChannel(EntDistError):
    pass


class DimensionTooLarge(EntDistError):
    pass


class SupportFailure(EntDistError):
    pass
