"""Exception taxonomy shared across the package."""


class PeaklabError(Exception):
    """Base class for package-specific failures."""


class SizeLimitError(PeaklabError):
    """Input exceeds a configured size guard."""


class InternalConsistencyError(PeaklabError):
    """An exact identity that must hold by construction failed to hold."""


class PrecisionError(PeaklabError):
    """A numeric routine could not certify its requested accuracy."""


class CycleTypeParseError(ValueError):
    """Cycle-type text failed to parse.

    Carries the character offset of the offending token so callers can
    point at the exact spot in the input.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
