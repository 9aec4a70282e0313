"""Exception types and internal fault counters shared across the package."""


class OutOfRangeError(ValueError):
    """An element index lies outside the structure's range 0..n-1."""


class CorruptForestError(RuntimeError):
    """An internal forest invariant is broken (e.g. a parent-pointer cycle)."""


class NotSameClassError(ValueError):
    """Two elements were required to share a class (or an ancestor) but do not."""


class EmptyLogError(ValueError):
    """rollback was called on a state with an empty union log."""


class ProofCheckError(ValueError):
    """Base class for certificate rejections."""


class AssumptionIndexError(ProofCheckError):
    """An assumption step refers past the end of the union log."""


class TransitivityMismatchError(ProofCheckError):
    """The two premises of a transitivity step do not share a midpoint."""


class CertificateParseError(ValueError):
    """A textual certificate is malformed."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class ScriptError(ValueError):
    """A command script is malformed or failed to execute."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FuelExhaustedError(RuntimeError):
    """The explain recursion exceeded its fuel budget.

    This never happens on well-formed inputs; it turns a broken termination
    invariant into a loud fault instead of a hang.
    """


# Counter of observed fuel exhaustions.  The acceptance suite asserts that it
# stays at zero; tests that provoke exhaustion on purpose save and restore it.
_fuel_exhaustions = 0


def record_fuel_exhaustion():
    global _fuel_exhaustions
    _fuel_exhaustions += 1


def fuel_exhaustion_count():
    return _fuel_exhaustions


def reset_fuel_exhaustions(value=0):
    global _fuel_exhaustions
    _fuel_exhaustions = value
