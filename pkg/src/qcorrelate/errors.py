"""Exception hierarchy.  Everything raised on bad input derives from :class:`QCorrelateError`."""


class QCorrelateError(Exception):
    pass


class DimensionMismatch(QCorrelateError, ValueError):
    pass


class NotHermitian(QCorrelateError, ValueError):
    pass


class NotNormalized(QCorrelateError, ValueError):
    pass


class NotProjection(QCorrelateError, ValueError):
    pass


class NotUnitary(QCorrelateError, ValueError):
    pass


class NotEigenbasis(QCorrelateError, ValueError):
    pass


class NotDecomposable(QCorrelateError):
    """The state is not a superposition of common eigenstates with common eigenvalues."""


class AmbiguousOutcome(QCorrelateError, ValueError):
    """Two outcome values fall inside the value-matching window of one another."""


class ZeroShots(QCorrelateError, ValueError):
    pass


class SchemaError(QCorrelateError, ValueError):
    pass


class NumericalInconsistency(QCorrelateError, RuntimeError):
    """An identity that must hold exactly failed beyond tolerance; indicates ill-conditioned input."""
