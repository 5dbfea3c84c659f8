class MarkoffLabError(Exception):
    """Base class for every error raised by markoff_lab."""

    pass


class RationalValue(MarkoffLabError):
    """Exception raised when a quadratic irrational would be rational."""

    pass


class SignChange(MarkoffLabError):
    """Exception raised when a Möbius denominator vanishes inside an interval."""

    pass


class Degenerate(MarkoffLabError):
    """Exception raised for degenerate inputs such as the triple (1,1,1)."""

    pass


class NotInTree(MarkoffLabError):
    """Exception raised for triples that are not nodes of the extended Markoff tree."""

    pass


class NotInPsiTree(MarkoffLabError):
    """Exception raised for triples without a U/V endomorphism."""

    pass


class FactorizationFailure(MarkoffLabError):
    """Exception raised when (ab)^e has no a·p·b palindromic factorization."""

    pass


class OutOfWindow(MarkoffLabError):
    """Exception raised when a position lacks digits on one side of the window."""

    pass


class ZeroForm(MarkoffLabError):
    """Exception raised for the identically zero quadratic form."""

    pass


class MethodDisagreement(MarkoffLabError):
    """Exception raised when two constructions of the same number disagree."""

    pass


class PrecisionExhausted(MarkoffLabError):
    """Exception raised when an enclosure is too wide to decide an integer part."""

    pass


class UnknownSuite(MarkoffLabError):
    """Exception raised for verification suite names that do not exist."""

    pass
