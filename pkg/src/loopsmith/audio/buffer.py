"""In-memory audio: immutable float32 sample buffers and mixing arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class AudioBuffer:
    """Per-channel float samples in [-1, 1].

    ``samples`` has shape (channels, frames) and is made read-only at
    construction, so buffers can be shared across threads freely.
    """

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float32)
        if samples.ndim == 1:
            samples = samples[np.newaxis, :]
        if samples.ndim != 2:
            raise ValidationError(f"samples must be 1-D or 2-D, got {samples.ndim}-D")
        if samples.shape[0] not in (1, 2):
            raise ValidationError(f"channels must be 1 or 2, got {samples.shape[0]}")
        if int(self.sample_rate) <= 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate}")
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def length(self) -> int:
        return self.samples.shape[1]

    @property
    def duration_seconds(self) -> float:
        return self.samples.shape[1] / self.sample_rate

    def channel(self, i: int) -> np.ndarray:
        return self.samples[i]

    def with_samples(self, samples: np.ndarray) -> "AudioBuffer":
        """New buffer with the same sample rate."""
        return AudioBuffer(samples, self.sample_rate)


def silence(duration_s: float, sample_rate: int = 44100, channels: int = 2) -> AudioBuffer:
    n = max(0, int(round(duration_s * sample_rate)))
    return AudioBuffer(np.zeros((channels, n), dtype=np.float32), sample_rate)


def mix(buffers: list[AudioBuffer], gains: list[float]) -> AudioBuffer:
    """Samplewise weighted sum of equal-rate, equal-channel buffers.

    Shorter inputs are zero-padded to the longest; the sum is hard-clamped
    to [-1, 1] only where it exceeds unity, so mixing is exactly linear as
    long as the sum stays in range.
    """
    if not buffers:
        raise ValidationError("mix requires at least one buffer")
    if len(gains) != len(buffers):
        raise ValidationError(f"{len(buffers)} buffers but {len(gains)} gains")
    rate = buffers[0].sample_rate
    channels = buffers[0].channels
    for b in buffers[1:]:
        if b.sample_rate != rate:
            raise ValidationError(f"sample-rate mismatch: {b.sample_rate} != {rate}")
        if b.channels != channels:
            raise ValidationError(f"channel-count mismatch: {b.channels} != {channels}")
    length = max(b.length for b in buffers)
    acc = np.zeros((channels, length), dtype=np.float64)
    for b, g in zip(buffers, gains):
        acc[:, : b.length] += b.samples.astype(np.float64) * float(g)
    np.clip(acc, -1.0, 1.0, out=acc)
    return AudioBuffer(acc.astype(np.float32), rate)
