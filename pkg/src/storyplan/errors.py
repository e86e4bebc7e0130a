"""Shared exception types.

The CLI maps these onto exit codes: DataFormatError -> 2,
AdvisorUnavailable -> 3. Contract violations raise plain ValueError.
"""


class DataFormatError(Exception):
    """Malformed or inconsistent input data (corpus, parse, event, or graph files)."""


class AdvisorUnavailable(Exception):
    """Remote advisor could not be reached and fallback was disabled."""


class PlanError(Exception):
    """Planning aborted; carries the partial plan assembled so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
