"""Typed errors that map cleanly onto process exit codes.

Every failure a caller can cause is a validation error (exit 1). Running out
of room is a resource error (exit 2) and says how big the thing would have
been. A failed internal cross-check is exit 3, the same code ``verify`` uses
for a theorem/oracle disagreement, because both mean the build is wrong.
"""


class HinvError(Exception):
    """Base class for all hyperlattice failures.

    ``exit_code`` is what the CLI returns and ``message`` is the one-line
    explanation printed after ``Error:``.
    """

    exit_code = 1
    message = "Unexpected hyperlattice error"

    def __init__(self, message: str | None = None, *, detail: str | None = None):
        self.message = message or self.message
        # Printed indented under the message, e.g. the offending value.
        self.detail = detail
        super().__init__(self.message)


class InvalidSegre(HinvError):
    """A Segre characteristic is empty, non-positive, increasing or unparseable."""

    message = "Invalid Segre characteristic"


class InvalidTuple(HinvError):
    """A tuple has the wrong length or is not an element of the lattice."""

    message = "Tuple is not an element of the hyperlattice"


class CongruenceUndefined(HinvError):
    """The congruence kind does not apply to this Segre characteristic."""

    message = "Congruence is not defined for this Segre characteristic"


class UnsupportedFormat(HinvError):
    """The subcommand cannot render the requested output format."""

    message = "Output format not supported here"


class OutputError(HinvError):
    """The --output file could not be written."""

    message = "Cannot write output"


class BoundExceeded(HinvError):
    """A lattice is larger than the configured node bound.

    ``size`` is the would-be node count, so the caller can decide whether
    raising the bound is reasonable.
    """

    exit_code = 2
    message = "Node bound exceeded"

    def __init__(self, message: str | None = None, *, size: int, bound: int):
        self.size = size
        self.bound = bound
        super().__init__(message, detail=f"{size} nodes, bound is {bound}")


class ConsistencyError(HinvError):
    """Two independent computations disagreed. Always a bug."""

    exit_code = 3
    message = "Internal consistency check failed"
