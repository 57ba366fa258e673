"""Exception types shared across the package."""

from __future__ import annotations


class SubquestError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(SubquestError):
    """A config file, suite file, or flag combination is invalid."""


class SuiteAuthoringError(SubquestError):
    """The task suite itself is broken (e.g. an unsolvable variation)."""


class RecordParseError(SubquestError):
    """A serialized record or response could not be parsed.

    Carries the raw text and, where known, the offending position.
    """

    def __init__(self, message: str, raw: str = "", position: int | None = None):
        super().__init__(message)
        self.raw = raw
        self.position = position


class TeacherTransportError(SubquestError):
    """A remote teacher/policy call failed after its retry budget."""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


class AnnotationError(SubquestError):
    """Annotation of one (task, variation) pair failed irrecoverably."""


class DataError(SubquestError):
    """Replay or dataset contents diverged from what the engine produces."""
