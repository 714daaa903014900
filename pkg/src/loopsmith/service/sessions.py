"""In-memory session registry with capacity and idle eviction."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from ..engine import Engine
from ..errors import LoopsmithError
from ..handler import Session


class SessionNotFound(LoopsmithError):
    pass


class SessionBusy(LoopsmithError):
    pass


class CapacityError(LoopsmithError):
    pass


@dataclass
class _Entry:
    session: Session
    created_at: float
    last_used: float
    busy: bool = field(default=False)


class SessionStore:
    """Sessions are evicted only when idle past the TTL and never mid-turn."""

    def __init__(self, engine: Engine, max_sessions: int = 64, idle_ttl_s: float = 3600.0):
        self.engine = engine
        self.max_sessions = max_sessions
        self.idle_ttl_s = idle_ttl_s
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()

    def _evict_idle(self, now: float) -> None:
        expired = [
            sid
            for sid, entry in self._entries.items()
            if not entry.busy and now - entry.last_used > self.idle_ttl_s
        ]
        for sid in expired:
            del self._entries[sid]

    def create(self) -> Session:
        now = time.monotonic()
        with self._lock:
            self._evict_idle(now)
            if len(self._entries) >= self.max_sessions:
                # full of fresh sessions: drop the oldest idle one if any
                idle = [(e.last_used, sid) for sid, e in self._entries.items() if not e.busy]
                if not idle:
                    raise CapacityError(f"session store full ({self.max_sessions} busy sessions)")
                del self._entries[min(idle)[1]]
            session = self.engine.new_session()
            self._entries[session.id] = _Entry(session, created_at=now, last_used=now)
            return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            entry = self._entries.get(session_id)
            if entry is None:
                raise SessionNotFound(f"unknown session {session_id}")
            entry.last_used = time.monotonic()
            return entry.session

    def is_busy(self, session_id: str) -> bool:
        with self._lock:
            entry = self._entries.get(session_id)
            if entry is None:
                raise SessionNotFound(f"unknown session {session_id}")
            return entry.busy

    def acquire(self, session_id: str) -> Session:
        """Mark the session busy for one turn; raises SessionBusy if in flight."""
        with self._lock:
            entry = self._entries.get(session_id)
            if entry is None:
                raise SessionNotFound(f"unknown session {session_id}")
            if entry.busy:
                raise SessionBusy(f"session {session_id} already has a turn in flight")
            entry.busy = True
            entry.last_used = time.monotonic()
            return entry.session

    def release(self, session_id: str) -> None:
        with self._lock:
            entry = self._entries.get(session_id)
            if entry is not None:
                entry.busy = False
                entry.last_used = time.monotonic()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
