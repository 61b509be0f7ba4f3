"""Exception types shared across the toolchain.

Every error raised by the library derives from :class:`CrannoError`, so the
CLI can map "data is wrong" uniformly to exit status 1 while usage errors
stay with argparse (exit status 2).
"""


class CrannoError(Exception):
    """Base class for all data-level errors raised by this package."""


class CorpusFormatError(CrannoError):
    """A corpus file line could not be parsed or violates an invariant."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownDialogueError(CrannoError):
    """Addressed dialogue id is not present in the corpus."""


class TurnOutOfRangeError(CrannoError):
    """Addressed turn index is outside the dialogue."""


class UnknownSourceError(CrannoError):
    """Turn reference does not name any known proposal."""


class DuplicateSourceError(CrannoError):
    """A proposal with the same source turn is already open."""


class ClosedProposalError(CrannoError):
    """Operation requires an open proposal but the target is closed."""


class LevelDomainError(CrannoError):
    """Operation is restricted to the four grounded levels."""


class IllegalAnswerError(CrannoError):
    """Answer is not among the current prompt's legal answers."""


class SessionFinishedError(CrannoError):
    """Session cursor is past the last turn; no prompts remain."""


class SessionFormatError(CrannoError):
    """A session file could not be parsed or replayed."""

    def __init__(self, message: str, entry: int | None = None):
        self.entry = entry
        if entry is not None:
            message = f"entry {entry}: {message}"
        super().__init__(message)


class AgreementError(CrannoError):
    """Annotation sets cannot be compared or merged as requested."""


class StatsError(CrannoError):
    """Statistics requested over mismatched or degenerate inputs."""
