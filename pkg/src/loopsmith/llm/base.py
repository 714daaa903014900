"""Language-model boundary: completion plus impression translation."""

from __future__ import annotations

from ..errors import TransportError, ValidationError


class LanguageModelClient:
    """Completion interface; ``complete`` retries transport failures."""

    retries: int = 2

    def complete(self, prompt: str) -> str:
        if not prompt:
            raise ValidationError("prompt must be non-empty")
        last_error: TransportError | None = None
        for _ in range(self.retries + 1):
            try:
                text = self._complete_once(prompt)
            except TransportError as exc:
                last_error = exc
                continue
            if text:
                return text
            last_error = TransportError("model returned an empty completion")
        raise last_error or TransportError("completion failed")

    def _complete_once(self, prompt: str) -> str:
        raise NotImplementedError

    def translate_impression(self, title: str) -> str:
        """Map a song title or vibe to a musical-feature description."""
        raise NotImplementedError
