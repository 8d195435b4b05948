"""Exception types shared across the package. The CLI maps them to exit codes."""


class PolygonInputError(ValueError):
    """Malformed file, out-of-range coordinate, or a polygon that fails validation."""


class BudgetExceededError(RuntimeError):
    """A strict-mode allocation would push the ledger above its budget."""

    def __init__(self, requested: int, available: int, level: int | None = None):
        self.requested = requested
        self.available = available
        self.level = level
        where = f" at recursion level {level}" if level is not None else ""
        super().__init__(
            f"workspace budget exceeded{where}: requested {requested} words, "
            f"{available} available"
        )


class InternalInvariantError(AssertionError):
    """A structural guarantee of the algorithm failed; indicates a bug or an
    input that slipped past validation."""


class UsageError(RuntimeError):
    """API misuse, e.g. advancing a finished cursor or an ambiguous selector."""
