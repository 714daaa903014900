"""The generative-model boundary: one uniform interface per capability."""

from __future__ import annotations

from dataclasses import dataclass

from ..audio import AudioBuffer
from ..config import CAPABILITIES
from ..errors import CapabilityError, ConfigError


@dataclass(frozen=True)
class BackendConfig:
    kind: str  # mock | remote
    endpoint: str | None = None
    timeout_s: float = 30.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("mock", "remote"):
            raise ConfigError(f"backend kind must be mock or remote, got {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ConfigError("remote backend requires an endpoint")
        if self.kind == "mock" and self.seed is None:
            raise ConfigError("mock backend requires a seed")


class GenerativeBackend:
    """Base backend; subclasses advertise a capability subset.

    Invoking a capability that is not advertised fails fast, before any
    synthesis or network activity.
    """

    capabilities: frozenset[str] = frozenset()

    def _require(self, capability: str) -> None:
        if capability not in CAPABILITIES:
            raise CapabilityError(f"unknown capability {capability!r}")
        if capability not in self.capabilities:
            raise CapabilityError(
                f"{type(self).__name__} does not advertise capability {capability!r}"
            )

    def generate(self, desc: str, duration_s: float, variant: int = 0) -> AudioBuffer:
        raise CapabilityError(f"{type(self).__name__} cannot generate")

    def continue_audio(
        self, prefix: AudioBuffer, desc: str, total_s: float, variant: int = 0
    ) -> AudioBuffer:
        raise CapabilityError(f"{type(self).__name__} cannot continue audio")

    def inpaint_region(
        self, buf: AudioBuffer, start_s: float, end_s: float, desc: str
    ) -> AudioBuffer:
        raise CapabilityError(f"{type(self).__name__} cannot inpaint")

    def separate(self, buf: AudioBuffer) -> dict[str, AudioBuffer]:
        raise CapabilityError(f"{type(self).__name__} cannot separate")

    def caption_audio(self, buf: AudioBuffer) -> str:
        raise CapabilityError(f"{type(self).__name__} cannot caption")

    def similarity(self, buf: AudioBuffer, desc: str) -> float:
        raise CapabilityError(f"{type(self).__name__} cannot score similarity")
