"""Exception hierarchy shared by every whmm module.

Each class carries a stable machine-readable ``code`` so the CLI and the
HTTP service can surface structured errors without string matching.
"""

from __future__ import annotations


class WhmmError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


# --- model construction / inference ---------------------------------------

class DimensionMismatch(WhmmError):
    code = "dimension_mismatch"


class NotRowStochastic(WhmmError):
    code = "not_row_stochastic"

    def __init__(self, row: int, row_sum: float, detail: str | None = None):
        self.row = row
        self.row_sum = row_sum
        msg = detail or f"row {row} sums to {row_sum!r}, expected 1 within 1e-9"
        super().__init__(msg)


class NonPositiveWeight(WhmmError):
    code = "non_positive_weight"

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"weight at index {index} is {value!r}, expected a positive finite value")


class InvalidInitial(WhmmError):
    code = "invalid_initial"


class DegenerateRow(WhmmError):
    code = "degenerate_row"

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"weighted mass of row {row} underflowed to zero")


class PathStateOutOfRange(WhmmError):
    code = "path_state_out_of_range"


class EmptyTargetSet(WhmmError):
    code = "empty_target_set"


class HorizonZero(WhmmError):
    code = "horizon_zero"


class NoPath(WhmmError):
    """No positive-probability path exists; diagnostic, not a crash."""

    code = "no_path"


class EmptyObservations(WhmmError):
    code = "empty_observations"


# --- modal logic -----------------------------------------------------------

class UnknownWorld(WhmmError):
    code = "unknown_world"


class FormulaParseError(WhmmError):
    code = "formula_parse_error"

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class InvalidFrame(WhmmError):
    code = "invalid_frame"


# --- problems / experiment ---------------------------------------------------

class InvalidProblem(WhmmError):
    code = "invalid_problem"


class EmptyCohort(WhmmError):
    code = "empty_cohort"


class MixedProblemIds(WhmmError):
    code = "mixed_problem_ids"


# --- persistence / service ---------------------------------------------------

class SchemaError(WhmmError):
    code = "schema_error"


class UnknownProblem(WhmmError):
    code = "unknown_problem"


class UnknownSession(WhmmError):
    code = "unknown_session"


class UnknownCohort(WhmmError):
    code = "unknown_cohort"


class PhaseOrderViolation(WhmmError):
    code = "phase_order_violation"


class DuplicateSubmission(WhmmError):
    code = "duplicate_submission"


class InvalidLabel(WhmmError):
    code = "invalid_label"
