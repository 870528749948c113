"""Exception hierarchy.

Two lanes matter to callers (and to the CLI exit codes): ``InputError`` means
the caller handed us something that violates a documented precondition or a
file is malformed; ``NumericalError`` means the computation itself broke down.
"""


class EmmsError(Exception):
    """Base class for every error raised by this package."""


class InputError(EmmsError):
    """Bad input: precondition violation, malformed file, schema mismatch."""


class NumericalError(EmmsError):
    """Numerical failure: singular system, diverging objective."""


# --- linear algebra ---------------------------------------------------------

class RankDeficientError(NumericalError):
    """Normal system numerically singular and no ridge was requested."""


class NonFiniteError(NumericalError):
    """A solver objective became NaN/Inf (usually badly scaled input)."""


class NonFiniteInputError(InputError):
    """External data contains NaN/Inf entries."""


class ShapeMismatchError(InputError):
    """Operands have incompatible shapes."""


class EmptyInputError(InputError):
    """An operand that must be nonempty is empty."""


# --- label space -------------------------------------------------------------

class ZeroRowError(InputError):
    """A row that must be normalizable has (near-)zero norm."""

    def __init__(self, row: int, message: str | None = None):
        self.row = row
        super().__init__(message or f"row {row} has zero norm")


class OutOfRangeError(InputError):
    """A category id falls outside [0, class_count)."""


# --- metrics -----------------------------------------------------------------

class TooFewModelsError(InputError):
    """Rank metrics need at least two models."""


class ZeroVarianceError(InputError):
    """Pearson correlation undefined: one coordinate has zero variance."""


class BadKError(InputError):
    """rel@k needs 1 <= k <= number of models."""


# --- file formats ------------------------------------------------------------

class BadMagicError(InputError):
    """File does not start with a parseable NPY v1.0 preamble."""


class UnsupportedDtypeError(InputError):
    """NPY descr other than little-endian float32/float64."""


class FortranOrderUnsupportedError(InputError):
    """NPY payload stored in Fortran order."""


class TruncatedPayloadError(InputError):
    """NPY file ends before the declared payload does."""


class IoFailureError(EmmsError):
    """Write-side failure (unwritable path, empty matrix)."""


class RaggedRowsError(InputError):
    """CSV rows have unequal lengths."""

    def __init__(self, line: int, message: str | None = None):
        self.line = line
        super().__init__(message or f"line {line}: ragged row")


class UnparsableFloatError(InputError):
    """A CSV cell is not a float."""

    def __init__(self, line: int, col: int, message: str | None = None):
        self.line = line
        self.col = col
        super().__init__(message or f"line {line}, column {col}: unparsable float")


class DuplicateModelError(InputError):
    """A model id appears twice in a ground-truth file or manifest."""


def with_context(exc: EmmsError, context: str) -> EmmsError:
    """Copy of ``exc`` (same type, same extra attributes) with a context prefix.

    Keeps the input/numerical lane of the original error intact when the
    pipeline attributes a failure to a specific model or file.
    """
    new = EmmsError.__new__(type(exc))
    Exception.__init__(new, f"{context}: {exc}")
    for attr in ("row", "line", "col"):
        if hasattr(exc, attr):
            setattr(new, attr, getattr(exc, attr))
    return new
