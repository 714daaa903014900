"""Frequency-band splitting via FFT bin partitioning.

Each rfft bin is assigned to exactly one band, so the band signals sum back
to the input exactly (up to float rounding). This powers the mock source
separator, whose stems must partition the mix.
"""

from __future__ import annotations

import numpy as np

from ..audio import AudioBuffer
from ..errors import ValidationError


def _validate_bands(bands: list[tuple[float, float]], nyquist: float) -> None:
    if not bands:
        raise ValidationError("at least one band required")
    prev_high = 0.0
    for i, (low, high) in enumerate(bands):
        if low >= high:
            raise ValidationError(f"band {i} has low {low} >= high {high}")
        if low < prev_high - 1e-9:
            raise ValidationError(f"band {i} overlaps previous band (low {low} < {prev_high})")
        if low > prev_high + 1e-9:
            raise ValidationError(f"bands leave a gap at {prev_high}..{low} Hz")
        prev_high = high
    if abs(bands[0][0]) > 1e-9:
        raise ValidationError(f"first band must start at 0 Hz, got {bands[0][0]}")
    if abs(prev_high - nyquist) > 1e-6:
        raise ValidationError(f"last band must end at Nyquist {nyquist}, got {prev_high}")


def band_split(buf: AudioBuffer, bands: list[tuple[float, float]]) -> list[AudioBuffer]:
    """Split into per-band buffers whose samplewise sum reconstructs the input."""
    if buf.length == 0:
        raise ValidationError("empty buffer")
    nyquist = buf.sample_rate / 2.0
    _validate_bands(bands, nyquist)

    n = buf.length
    spectrum = np.fft.rfft(buf.samples.astype(np.float64), axis=1)
    freqs = np.fft.rfftfreq(n, d=1.0 / buf.sample_rate)
    lows = np.array([b[0] for b in bands])
    membership = np.clip(np.searchsorted(lows, freqs, side="right") - 1, 0, len(bands) - 1)

    out = []
    for i in range(len(bands)):
        masked = np.where(membership == i, spectrum, 0.0)
        signal = np.fft.irfft(masked, n=n, axis=1)
        out.append(AudioBuffer(np.clip(signal, -1, 1).astype(np.float32), buf.sample_rate))
    return out
