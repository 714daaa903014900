"""Exception hierarchy shared across the engine."""


class LoopsmithError(Exception):
    """Base class for all engine errors."""


class DecodeError(LoopsmithError):
    """Malformed or unsupported WAV input; message names the offending field."""


class EncodeError(LoopsmithError):
    """Buffer cannot be encoded (e.g. empty)."""


class StorageError(LoopsmithError):
    """Asset store I/O failure."""


class ValidationError(LoopsmithError):
    """Attribute or parameter outside its documented range."""


class NonexistentFileError(LoopsmithError):
    """An asset path was referenced that is not in the store."""

    def __init__(self, path: str):
        super().__init__(f"nonexistent file {path}")
        self.path = path


class ProtocolParseError(LoopsmithError):
    """Model output matched neither the tool-step nor the final-answer format."""

    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


class ArityError(LoopsmithError):
    """Tool argument string split into the wrong number of parts."""

    def __init__(self, expected: int, found: int):
        super().__init__(f"expected {expected} comma separated parts, found {found}")
        self.expected = expected
        self.found = found


class AssemblyError(LoopsmithError):
    """Prompt template left a placeholder unresolved."""


class BackendError(LoopsmithError):
    """A generative backend call failed (includes transport detail for remotes)."""


class CapabilityError(BackendError):
    """A capability was invoked that the backend does not advertise."""


class TransportError(LoopsmithError):
    """Language-model call failed after exhausting retries."""


class TurnError(LoopsmithError):
    """A dialogue turn could not be completed; session state was rolled back."""


class ConfigError(LoopsmithError):
    """Invalid engine configuration."""


class TranscriptError(LoopsmithError):
    """Transcript file unreadable or invalid."""
