"""
Exception hierarchy. Configuration and precondition errors map to exit code 2 / HTTP 400.

ContextError and ParameterRangeError are also ValueErrors, so pydantic
validators raising them surface as ordinary ValidationErrors.
"""

from typing import Any, Optional


class ToolkitError(Exception):
    """Base class for every error raised deliberately by this package"""


class ContextError(ToolkitError, ValueError):
    """Invalid numeric context source: q out of range, singular F, N < 2, both or neither of q/F"""


class WordFormatError(ToolkitError):
    """Word string not over the u/b/e alphabet"""


class ParameterRangeError(ToolkitError, ValueError):
    """Operation called outside its documented parameter range"""


class MissingNeighbourError(ToolkitError):
    """A function on the tree lacks a value needed for a kernel average"""

    def __init__(self, word: str):
        super().__init__(f"No value supplied for neighbour {word}")
        self.word = word


class VerificationFailure(ToolkitError):
    """A verification suite produced at least one failing check"""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report
