"""Error types shared across the package.

Every error carries a stable ``code`` string so CLI consumers and tests can
dispatch on the failure kind without parsing messages.
"""


class ThresholdlabError(Exception):
    """Base class for all package errors."""

    code = "E_ERROR"


class InvalidSequenceError(ThresholdlabError, ValueError):
    """Binary creation sequence rejected at parse time."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class NotEigenvectorError(ThresholdlabError, ArithmeticError):
    """A shared-basis vector failed the exact eigenvector check.

    Every connected threshold graph is diagonalized by the shared basis, so
    this always signals an implementation bug rather than bad input.
    """

    code = "E_NOT_EIGENVECTOR"


class NotEigenvalueError(ThresholdlabError, ValueError):
    code = "E_NOT_EIGENVALUE"


class NotSSGroupError(ThresholdlabError, ValueError):
    code = "E_NOT_SS_GROUP"


class NotSimplyStructuredError(ThresholdlabError, ValueError):
    code = "E_NOT_SS"


class TooLargeError(ThresholdlabError, ValueError):
    code = "E_TOO_LARGE"


class JoinGapError(ThresholdlabError, ValueError):
    code = "E_JOIN_GAP"


class VerifyFailedError(ThresholdlabError, ArithmeticError):
    code = "E_VERIFY_FAILED"


class BudgetExceededError(ThresholdlabError, RuntimeError):
    code = "E_BUDGET"


class FixedStateError(ThresholdlabError, ValueError):
    code = "E_FIXED"
