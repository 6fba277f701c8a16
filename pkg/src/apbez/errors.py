class ApbezError(Exception):
    """
    Base class for every error raised by apbez.
    """

    def __init__(self, message=None):
        """
        Initialize the ApbezError.

        :param message: A message describing the error (optional).
        """
        super().__init__(message)


class InvalidMagnitudeError(ApbezError, ValueError):
    """
    Raised when a tangent magnitude r1 or r2 is not strictly positive.
    """


class DomainError(ApbezError, ValueError):
    """
    Raised when an argument lies outside the domain of an operation (a curve parameter outside [0, 1], an
    unsupported derivative order, an empty point set, ...).
    """


class NearVerticalTangentError(DomainError):
    """
    Raised when a spatial derivative is requested where the first component of the curve is stationary.
    """


class DegenerateSegmentError(DomainError):
    """
    Raised when a segment has zero chord length or an empty parameter range.
    """


class DegenerateDenominatorError(ApbezError, ArithmeticError):
    """
    Raised when the closed-form magnitude solve divides by (numerically) zero.
    """


class InfeasibleMagnitudeError(ApbezError, ValueError):
    """
    Raised when the area constraint can only be met with a non-positive tangent magnitude.
    """


class InsufficientDataError(ApbezError, ValueError):
    """
    Raised when a convergence order cannot be fitted from the given records.
    """


class CatalogError(ApbezError, LookupError):
    """
    Raised when a target name is not part of the builtin catalog.
    """


class ConfigError(ApbezError, ValueError):
    """
    Raised when an environment setting cannot be parsed.
    """


class NeedsRefinementError(ApbezError):
    """
    Raised by a segment constructor when the interval has to be split before an area-preserving interpolant
    exists (incompatible area sign, non-positive magnitude, degenerate solve).
    """

    def __init__(self, message=None, report=None):
        """
        Initialize the NeedsRefinementError.

        :param message: A message describing the error (optional).
        :param report: The :class:`~apbez.area.FeasibilityReport` of the offending data (optional).
        """
        super().__init__(message)
        self.report = report


class InfeasibleSegmentError(ApbezError):
    """
    Raised by the piecewise driver when bisection reached its depth limit without producing a feasible segment.
    """

    def __init__(self, message=None, s0: float = None, s1: float = None, report=None):
        """
        Initialize the InfeasibleSegmentError.

        :param message: A message describing the error (optional).
        :param s0: Start of the offending subinterval.
        :param s1: End of the offending subinterval.
        :param report: The last feasibility report seen for that subinterval (optional).
        """
        super().__init__(message)
        self.s0 = s0
        self.s1 = s1
        self.report = report


class StudyError(ApbezError):
    """
    Raised when a convergence study fails at one of its refinement levels.
    """

    def __init__(self, message=None, level: int = None):
        """
        Initialize the StudyError.

        :param message: A message describing the error (optional).
        :param level: Index of the failing level in the study configuration.
        """
        super().__init__(message)
        self.level = level
