"""Chat-completion client for any hosted model with an OpenAI-style API."""

from __future__ import annotations

import requests

from ..errors import TransportError, ValidationError
from ..protocol.grammar import THOUGHT_MARKER, TOOL_QUESTION
from .base import LanguageModelClient

# Engineering artifact: the impression-translation instruction is not part
# of the protocol grammar, only of this client.
TRANSLATION_PROMPT = (
    "You are a music expert. Rewrite the following song title or vibe as a short "
    "description of musical features (genre, mood, tempo, instrumentation) suitable "
    "as a text-to-music prompt. Reply with the description only.\n\nImpression: {title}"
)


class RemoteChatClient(LanguageModelClient):
    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        timeout_s: float = 60.0,
        retries: int = 2,
    ):
        if not endpoint or not model:
            raise ValidationError("remote language model requires endpoint and model")
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout_s = timeout_s
        self.retries = retries

    def _post(self, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = requests.post(
                f"{self.endpoint}/chat/completions",
                json={"model": self.model, "messages": [{"role": "user", "content": prompt}]},
                headers=headers,
                timeout=self.timeout_s,
            )
            response.raise_for_status()
            content = response.json()["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
            raise TransportError(f"completion request failed: {exc}") from exc
        return content or ""

    def _complete_once(self, prompt: str) -> str:
        text = self._post(prompt).strip()
        # Models continuing the prompt's trailing "Thought: ... tool? " line
        # omit the marker; restore it so the strict parser applies uniformly.
        if text.startswith(("Yes", "No")):
            text = f"{THOUGHT_MARKER} {TOOL_QUESTION} {text}"
        return text

    def translate_impression(self, title: str) -> str:
        title = title.strip()
        if not title:
            raise ValidationError("impression title must be non-empty")
        text = self._post(TRANSLATION_PROMPT.format(title=title)).strip()
        if not text:
            raise TransportError("impression translation returned empty text")
        return text
