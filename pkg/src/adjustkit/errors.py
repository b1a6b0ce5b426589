"""Exception hierarchy.

Every error carries a stable string code so CLI consumers and tests can match
on identity instead of message text.
"""

from __future__ import annotations


class AdjustKitError(Exception):
    """Base class for all package errors."""

    code = "ERROR"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = self.details
        return out


class NegativeMassError(AdjustKitError):
    code = "NEGATIVE_MASS"


class NotNormalizedError(AdjustKitError):
    code = "NOT_NORMALIZED"


class ShapeMismatchError(AdjustKitError):
    code = "SHAPE_MISMATCH"


class UnknownVariableError(AdjustKitError):
    code = "UNKNOWN_VARIABLE"


class ZeroConditionError(AdjustKitError):
    code = "ZERO_CONDITION"


class ParseError(AdjustKitError):
    code = "PARSE_ERROR"


class PositivityViolationError(AdjustKitError):
    code = "POSITIVITY_VIOLATION"


class EmptyDatasetError(AdjustKitError):
    code = "EMPTY_DATASET"


class OutOfRangeError(AdjustKitError):
    code = "OUT_OF_RANGE"


class InsufficientSamplesError(AdjustKitError):
    """Raised by empirical testers when the dataset is below budget.

    `required` is the number of rows that would have sufficed, `available`
    what the dataset actually held.
    """

    code = "INSUFFICIENT_SAMPLES"

    def __init__(self, message: str, required: int, available: int, **details):
        super().__init__(message, required=required, available=available, **details)
        self.required = required
        self.available = available


class CandidateSetTooLargeError(AdjustKitError):
    code = "CANDIDATE_SET_TOO_LARGE"


class ParamRangeError(AdjustKitError):
    code = "PARAM_RANGE"


class UsageError(AdjustKitError):
    code = "USAGE"
