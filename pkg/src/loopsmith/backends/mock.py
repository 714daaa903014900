"""Deterministic stand-ins for the neural backends.

Every mock output is a pure function of (seed, inputs): descriptions are
hashed into oscillator banks over a pentatonic table, continuation copies
its prefix verbatim, inpainting writes RMS-matched seeded noise, and
separation is an exact band-split partition. That keeps every chain test
reproducible across processes while staying spectrally checkable.
"""

from __future__ import annotations

import hashlib
import threading

import numpy as np

from ..audio import AudioBuffer
from ..dsp.bands import band_split
from ..errors import BackendError, ValidationError
from ..gat import STEM_NAMES
from .base import GenerativeBackend

# A-minor pentatonic anchors; octave and detune come from the hash.
_PENTATONIC = (220.0, 261.63, 293.66, 329.63, 392.0)

# Stem membership by Nyquist fraction: exact partition of (0, Nyquist).
_STEM_EDGES = (0.0, 1 / 64, 1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0)
_STEM_ORDER = ("bass", "drums", "vocals", "guitar", "piano", "other")


def _digest(seed: int, *parts) -> bytes:
    h = hashlib.sha256()
    h.update(str(seed).encode())
    for part in parts:
        h.update(b"\x00")
        h.update(part if isinstance(part, bytes) else str(part).encode())
    return h.digest()


class MockBackend(GenerativeBackend):
    """Seeded synthetic backend covering any capability subset."""

    def __init__(
        self,
        seed: int,
        capabilities=("generate", "continue", "inpaint", "separate", "caption", "similarity"),
        sample_rate: int = 44100,
        channels: int = 2,
        call_log: list | None = None,
    ):
        self.seed = seed
        self.capabilities = frozenset(capabilities)
        self.sample_rate = sample_rate
        self.channels = channels
        self._log = call_log
        self._log_lock = threading.Lock()

    def _record(self, op: str, detail: str) -> None:
        if self._log is not None:
            with self._log_lock:
                self._log.append((f"backend.{op}", detail))

    def _synthesize(self, tag: str, desc: str, n: int, channels: int, variant: int) -> np.ndarray:
        d = _digest(self.seed, tag, desc, variant)
        n_osc = 2 + d[0] % 3
        t = np.arange(n) / self.sample_rate
        out = np.zeros((channels, n))
        for i in range(n_osc):
            base = _PENTATONIC[d[1 + i] % len(_PENTATONIC)]
            octave = (d[6 + i] % 3) - 1
            detune = (d[9 + i] / 255.0 - 0.5) * 4.0
            freq = base * (2.0**octave) + detune
            amp = (0.5 / n_osc) * (0.6 + 0.4 * d[12 + i] / 255.0)
            phase = 2.0 * np.pi * d[17 + i] / 255.0
            tremolo = 1.0 + 0.15 * np.sin(2.0 * np.pi * (0.5 + 2.0 * d[22 + i] / 255.0) * t)
            tone = amp * tremolo * np.sin(2.0 * np.pi * freq * t + phase)
            for c in range(channels):
                pan = 1.0 if channels == 1 else (0.7 + 0.3 * ((d[25 + i] >> c) & 1))
                out[c] += pan * tone
        # derived rhythmic pulse so loops have RMS structure
        beat_hz = 1.5 + 2.5 * d[16] / 255.0
        pulse = 0.65 + 0.35 * (0.5 + 0.5 * np.sin(2.0 * np.pi * beat_hz * t))
        out *= pulse
        ramp = min(n, int(0.01 * self.sample_rate))
        if ramp > 0:
            fade = np.linspace(0.0, 1.0, ramp)
            out[:, :ramp] *= fade
            out[:, -ramp:] *= fade[::-1]
        return np.clip(out, -1.0, 1.0)

    def generate(self, desc: str, duration_s: float, variant: int = 0) -> AudioBuffer:
        self._require("generate")
        if duration_s <= 0:
            raise ValidationError(f"duration must be positive, got {duration_s}")
        self._record("generate", desc)
        n = int(round(duration_s * self.sample_rate))
        samples = self._synthesize("generate", desc, n, self.channels, variant)
        return AudioBuffer(samples.astype(np.float32), self.sample_rate)

    def continue_audio(
        self, prefix: AudioBuffer, desc: str, total_s: float, variant: int = 0
    ) -> AudioBuffer:
        self._require("continue")
        if total_s < prefix.duration_seconds:
            raise ValidationError(
                f"total duration {total_s}s shorter than prefix {prefix.duration_seconds:.2f}s"
            )
        self._record("continue", desc)
        n_total = int(round(total_s * prefix.sample_rate))
        n_tail = max(0, n_total - prefix.length)
        tail = self._synthesize("continue", desc, n_tail, prefix.channels, variant)
        # prefix is copied verbatim; only the appended tail is synthetic
        samples = np.concatenate([prefix.samples, tail.astype(np.float32)], axis=1)
        return AudioBuffer(samples, prefix.sample_rate)

    def inpaint_region(
        self, buf: AudioBuffer, start_s: float, end_s: float, desc: str
    ) -> AudioBuffer:
        self._require("inpaint")
        if not 0 <= start_s < end_s <= buf.duration_seconds + 1e-9:
            raise ValidationError(
                f"invalid region [{start_s}, {end_s}) for {buf.duration_seconds:.2f}s buffer"
            )
        self._record("inpaint", f"{start_s}-{end_s}")
        n0 = int(round(start_s * buf.sample_rate))
        n1 = int(round(end_s * buf.sample_rate))
        region = buf.samples[:, n0:n1].astype(np.float64)
        rms = float(np.sqrt(np.mean(region**2))) if region.size else 0.0
        seed_int = int.from_bytes(_digest(self.seed, "inpaint", desc, n0, n1)[:8], "big")
        rng = np.random.Generator(np.random.PCG64(seed_int))
        noise = rng.standard_normal(region.shape)
        if noise.size:
            noise *= rms / (np.sqrt(np.mean(noise**2)) + 1e-12)
        out = buf.samples.copy()
        out[:, n0:n1] = np.clip(noise, -1.0, 1.0).astype(np.float32)
        return AudioBuffer(out, buf.sample_rate)

    def separate(self, buf: AudioBuffer) -> dict[str, AudioBuffer]:
        self._require("separate")
        self._record("separate", "")
        nyquist = buf.sample_rate / 2.0
        bands = [
            (_STEM_EDGES[i] * nyquist, _STEM_EDGES[i + 1] * nyquist)
            for i in range(len(_STEM_ORDER))
        ]
        split = band_split(buf, bands)
        stems = dict(zip(_STEM_ORDER, split))
        missing = set(STEM_NAMES) - set(stems)
        if missing:  # partition table drifted from the stem-name set
            raise BackendError(f"separator missing stems: {sorted(missing)}")
        return stems

    def caption_audio(self, buf: AudioBuffer) -> str:
        self._require("caption")
        self._record("caption", "")
        rms = float(np.sqrt(np.mean(buf.samples.astype(np.float64) ** 2)))
        return f"synthetic loop, duration {buf.duration_seconds:.1f}s, energy {rms:.3f}"

    def similarity(self, buf: AudioBuffer, desc: str) -> float:
        self._require("similarity")
        self._record("similarity", desc)
        content = hashlib.sha256(buf.samples.tobytes()).digest()
        d = _digest(self.seed, "similarity", desc, content)
        return int.from_bytes(d[:4], "big") / 2**32


class ScriptedSimilarityBackend(GenerativeBackend):
    """Similarity backend returning a preset score sequence, for gate tests.

    Scores are consumed in order; once exhausted the last score repeats.
    """

    capabilities = frozenset({"similarity"})

    def __init__(self, scores: list[float]):
        if not scores:
            raise ValidationError("scripted similarity needs at least one score")
        self.scores = list(scores)
        self.calls = 0
        self._lock = threading.Lock()

    def similarity(self, buf: AudioBuffer, desc: str) -> float:
        self._require("similarity")
        with self._lock:
            score = self.scores[min(self.calls, len(self.scores) - 1)]
            self.calls += 1
        return float(score)
