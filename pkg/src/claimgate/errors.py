"""Exception types raised across the pipeline."""


class ClaimgateError(Exception):
    """Base class for all errors raised by this package."""


# --- instance validation ---

class ValidationError(ClaimgateError):
    """A record violates the instance schema or its invariants."""


class EmptyConditions(ValidationError):
    pass


class NoCriticalCondition(ValidationError):
    pass


class DuplicateConditionIndex(ValidationError):
    pass


class LabelTaskMismatch(ValidationError):
    pass


# --- evidence scoring ---

class ScorerError(ClaimgateError):
    """Base class for scorer-backend failures."""


class ScorerUnavailable(ScorerError):
    """Remote backend failed after exhausting the retry budget."""


class MissingPrecomputedScore(ScorerError):
    """A precomputed-score file lacks an entry for a requested pair."""


class MalformedProbability(ScorerError):
    """A backend returned a probability triple outside its contract."""


class ProtocolError(ScorerError):
    """A remote scorer response does not match the wire protocol."""


# --- decision / analysis ---

class ModeInstanceMismatch(ClaimgateError):
    """Aggregation mode is incompatible with the instance shape."""


class InvalidLoss(ClaimgateError):
    """Loss specification violates the asymmetric ordering."""


class NonPositiveInput(ClaimgateError):
    pass


class OutOfRange(ClaimgateError):
    pass


# --- evaluation ---

class EmptyRecords(ClaimgateError):
    pass


class EmptyCurve(ClaimgateError):
    pass


# --- synthesis ---

class InvalidProfile(ClaimgateError):
    """A risk profile is malformed or inconsistent with its regime."""


# --- ingestion ---

class ParseError(ClaimgateError):
    """A line of an input file could not be decoded.

    Carries the 1-based line number and a reason string.
    """

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateId(ClaimgateError):
    pass
