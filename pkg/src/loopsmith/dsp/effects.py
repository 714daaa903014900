"""Deterministic audio effects: biquad filters, Schroeder reverb, chorus, gain."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..audio import AudioBuffer
from ..errors import ValidationError
from . import kernels

EFFECT_KINDS = ("reverb", "highpass", "lowpass", "chorus", "gain")

# Per-effect parameter defaults; tools route user requests onto these and
# may override single values from parsed qualifiers.
EFFECT_DEFAULTS: dict[str, dict[str, float]] = {
    "reverb": {"room": 0.5, "wet": 0.33},
    "highpass": {"cutoff_hz": 800.0},
    "lowpass": {"cutoff_hz": 2000.0},
    "chorus": {"rate_hz": 1.5, "depth_ms": 7.0},
    "gain": {"gain_db": 0.0},
}

# Classic Schroeder delays; combs run in parallel, allpasses in series.
_COMB_DELAYS_S = (0.0297, 0.0371, 0.0411, 0.0437)
_ALLPASS_STAGES = ((0.0050, 0.7), (0.0017, 0.7))


@dataclass(frozen=True)
class EffectParams:
    """An effect kind plus its parameter map, validated against ranges."""

    kind: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EFFECT_KINDS:
            raise ValidationError(f"unknown effect kind {self.kind!r}")
        merged = dict(EFFECT_DEFAULTS[self.kind])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ValidationError(f"unknown {self.kind} parameters: {sorted(unknown)}")
        merged.update(self.params)
        object.__setattr__(self, "params", merged)


def _validate(params: EffectParams, sample_rate: int) -> dict[str, float]:
    p = params.params
    kind = params.kind
    if kind == "reverb":
        if not 0.0 <= p["room"] <= 1.0:
            raise ValidationError(f"room size {p['room']} outside [0, 1]")
        if not 0.0 <= p["wet"] <= 1.0:
            raise ValidationError(f"wet mix {p['wet']} outside [0, 1]")
    elif kind in ("highpass", "lowpass"):
        nyquist = sample_rate / 2
        if not 20.0 <= p["cutoff_hz"] < nyquist:
            raise ValidationError(f"cutoff {p['cutoff_hz']} Hz outside [20, {nyquist})")
    elif kind == "chorus":
        if not 0.05 <= p["rate_hz"] <= 10.0:
            raise ValidationError(f"chorus rate {p['rate_hz']} Hz outside [0.05, 10]")
        if not 0.0 < p["depth_ms"] <= 20.0:
            raise ValidationError(f"chorus depth {p['depth_ms']} ms outside (0, 20]")
    elif kind == "gain":
        if not -60.0 <= p["gain_db"] <= 24.0:
            raise ValidationError(f"gain {p['gain_db']} dB outside [-60, 24]")
    return p


def _butterworth_coeffs(kind: str, cutoff_hz: float, sample_rate: int):
    """RBJ cookbook biquad with Q = 1/sqrt(2), i.e. 12 dB/octave Butterworth."""
    w0 = 2.0 * math.pi * cutoff_hz / sample_rate
    alpha = math.sin(w0) / (2.0 * (1.0 / math.sqrt(2.0)))
    cos_w0 = math.cos(w0)
    if kind == "lowpass":
        b0 = (1.0 - cos_w0) / 2.0
        b1 = 1.0 - cos_w0
        b2 = b0
    else:
        b0 = (1.0 + cos_w0) / 2.0
        b1 = -(1.0 + cos_w0)
        b2 = b0
    a0 = 1.0 + alpha
    return b0 / a0, b1 / a0, b2 / a0, -2.0 * cos_w0 / a0, (1.0 - alpha) / a0


def _reverb_channel(x: np.ndarray, sample_rate: int, room: float, channel: int) -> np.ndarray:
    # Reverberation time grows with room size; comb gains follow from the
    # usual g = 10^(-3 D / RT60) decay relation.
    rt60 = 0.3 + 1.7 * room
    wet = np.zeros_like(x)
    for delay_s in _COMB_DELAYS_S:
        # slight per-channel detune keeps stereo tails decorrelated
        delay = max(1, int((delay_s + channel * 0.0013) * sample_rate))
        g = 10.0 ** (-3.0 * delay / (rt60 * sample_rate))
        wet += kernels.feedback_comb(x, delay, g)
    wet /= len(_COMB_DELAYS_S)
    for delay_s, g in _ALLPASS_STAGES:
        delay = max(1, int(delay_s * sample_rate))
        wet = kernels.allpass(wet, delay, g)
    return wet


def apply_effect(buf: AudioBuffer, params: EffectParams) -> AudioBuffer:
    """Apply one effect; output is clamped to [-1, 1].

    Reverb appends a decay tail, so its output is longer than its input;
    every other effect preserves duration.
    """
    if buf.length == 0:
        raise ValidationError("empty buffer")
    p = _validate(params, buf.sample_rate)
    x = buf.samples.astype(np.float64)

    if params.kind == "gain":
        out = x * 10.0 ** (p["gain_db"] / 20.0)
    elif params.kind in ("highpass", "lowpass"):
        coeffs = _butterworth_coeffs(params.kind, p["cutoff_hz"], buf.sample_rate)
        out = np.stack([kernels.biquad(ch.copy(), *coeffs) for ch in x])
    elif params.kind == "chorus":
        depth_s = p["depth_ms"] / 1000.0
        base_s = depth_s + 0.020
        out = np.stack(
            [
                kernels.chorus_mod_delay(ch.copy(), buf.sample_rate, p["rate_hz"], depth_s, base_s, 0.5)
                for ch in x
            ]
        )
    else:  # reverb
        tail = int(buf.sample_rate * min(1.5, 0.25 + p["room"]))
        padded = np.concatenate([x, np.zeros((buf.channels, tail))], axis=1)
        dry_gain = math.cos(p["wet"] * math.pi / 2.0)
        wet_gain = math.sin(p["wet"] * math.pi / 2.0)
        out = np.stack(
            [
                dry_gain * padded[c] + wet_gain * _reverb_channel(padded[c].copy(), buf.sample_rate, p["room"], c)
                for c in range(buf.channels)
            ]
        )

    np.clip(out, -1.0, 1.0, out=out)
    return AudioBuffer(out.astype(np.float32), buf.sample_rate)
