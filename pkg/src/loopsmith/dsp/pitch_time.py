"""Pitch shifting and time stretching over AudioBuffer values.

Time stretch is waveform-similarity overlap-add; pitch shift is a
resample-then-stretch composition, with an anti-alias lowpass ahead of any
downsampling step. Both are deterministic and preserve |x| <= 1.
"""

from __future__ import annotations

import numpy as np

from ..audio import AudioBuffer
from ..errors import ValidationError
from . import kernels
from .effects import _butterworth_coeffs

SPEED_MIN = 0.25
SPEED_MAX = 4.0

_FRAME = 2048


def _hann(frame: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(frame) / frame)


def _stretch_impl(buf: AudioBuffer, speed: float) -> AudioBuffer:
    """Stretch without range validation (internal callers control speed)."""
    n = buf.length
    n_out = max(1, int(round(n / speed)))
    x = buf.samples.astype(np.float64)

    if n < 1024:
        # too short for overlap-add frames; plain resample on tiny inputs
        out = np.stack([kernels.resample_linear(ch.copy(), speed) for ch in x])
        return AudioBuffer(np.clip(out, -1, 1).astype(np.float32), buf.sample_rate)

    frame = _FRAME
    while frame * 4 > n:
        frame //= 2
    hop = frame // 2
    search = min(512, frame // 4)
    match = min(512, hop)

    mono = x.mean(axis=0)
    starts = kernels.wsola_offsets(mono, n_out, float(speed), frame, hop, search, match)
    window = _hann(frame)
    out = np.stack([kernels.ola_assemble(ch.copy(), starts, window, hop, n_out) for ch in x])
    return AudioBuffer(np.clip(out, -1, 1).astype(np.float32), buf.sample_rate)


def time_stretch_buffer(buf: AudioBuffer, speed: float) -> AudioBuffer:
    """Change playback speed without changing pitch.

    Output length is round(length / speed); speed 1.0 returns the input
    unchanged.
    """
    if buf.length == 0:
        raise ValidationError("empty buffer")
    if not SPEED_MIN <= speed <= SPEED_MAX:
        raise ValidationError(f"speed {speed} outside [{SPEED_MIN}, {SPEED_MAX}]")
    if speed == 1.0:
        return buf
    return _stretch_impl(buf, float(speed))


def pitch_shift_buffer(buf: AudioBuffer, semitones: int) -> AudioBuffer:
    """Shift pitch by whole semitones, preserving duration within 1%."""
    if buf.length == 0:
        raise ValidationError("empty buffer")
    semitones = int(semitones)
    if abs(semitones) > 24:
        raise ValidationError(f"semitones {semitones} outside [-24, 24]")
    if semitones == 0:
        return buf

    ratio = 2.0 ** (semitones / 12.0)
    x = buf.samples.astype(np.float64)
    if ratio > 1.0:
        # content above the post-resample Nyquist would alias; filter it out
        coeffs = _butterworth_coeffs("lowpass", 0.45 * buf.sample_rate / ratio, buf.sample_rate)
        x = np.stack([kernels.biquad(ch.copy(), *coeffs) for ch in x])

    resampled = np.stack([kernels.resample_linear(ch.copy(), ratio) for ch in x])
    shifted = AudioBuffer(np.clip(resampled, -1, 1).astype(np.float32), buf.sample_rate)
    # stretch back to the original sample count
    return _stretch_impl(shifted, shifted.length / buf.length)
