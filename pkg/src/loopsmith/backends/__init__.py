from .base import BackendConfig, GenerativeBackend
from .mock import MockBackend, ScriptedSimilarityBackend
from .remote import RemoteBackend, serve_backend

__all__ = [
    "BackendConfig",
    "GenerativeBackend",
    "MockBackend",
    "RemoteBackend",
    "ScriptedSimilarityBackend",
    "serve_backend",
]
