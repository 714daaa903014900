from .app import SUGGESTIONS, create_app
from .sessions import CapacityError, SessionBusy, SessionNotFound, SessionStore
from .transcript import load_transcript, run_transcript

__all__ = [
    "SUGGESTIONS",
    "CapacityError",
    "SessionBusy",
    "SessionNotFound",
    "SessionStore",
    "create_app",
    "load_transcript",
    "run_transcript",
]
