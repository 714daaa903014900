"""Hot numeric kernels, each in two lanes.

Lane selection happens once at import time: the numba lane is used when
numba imports cleanly and LOOPSMITH_NO_NUMBA is unset (or "0"); otherwise
the fallback lane runs vectorized numpy, with scipy.signal.lfilter standing
in for the recursive filters numpy cannot express without a Python loop.
``benchmarks/bench_kernels.py`` times the lanes against each other.

All kernels take 1-D float64 arrays; channel handling and dtype conversion
belong to the callers.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.signal import lfilter

_flag = os.environ.get("LOOPSMITH_NO_NUMBA", "").strip().lower()
_numba_disabled = _flag not in ("", "0", "false")

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and not _numba_disabled


# ---------------------------------------------------------------------------
# biquad (direct form II transposed)


def _biquad_py(x, b0, b1, b2, a1, a2):
    y = np.empty_like(x)
    z1 = 0.0
    z2 = 0.0
    for i in range(x.shape[0]):
        xi = x[i]
        yi = b0 * xi + z1
        z1 = b1 * xi - a1 * yi + z2
        z2 = b2 * xi - a2 * yi
        y[i] = yi
    return y


def _biquad_np(x, b0, b1, b2, a1, a2):
    return lfilter([b0, b1, b2], [1.0, a1, a2], x)


# ---------------------------------------------------------------------------
# Schroeder reverb building blocks


def _comb_py(x, delay, g):
    y = np.zeros_like(x)
    for i in range(x.shape[0]):
        acc = x[i]
        if i >= delay:
            acc += g * y[i - delay]
        y[i] = acc
    return y


def _comb_np(x, delay, g):
    a = np.zeros(delay + 1)
    a[0] = 1.0
    a[delay] = -g
    return lfilter([1.0], a, x)


def _allpass_py(x, delay, g):
    y = np.zeros_like(x)
    for i in range(x.shape[0]):
        acc = -g * x[i]
        if i >= delay:
            acc += x[i - delay] + g * y[i - delay]
        y[i] = acc
    return y


def _allpass_np(x, delay, g):
    b = np.zeros(delay + 1)
    b[0] = -g
    b[delay] = 1.0
    a = np.zeros(delay + 1)
    a[0] = 1.0
    a[delay] = -g
    return lfilter(b, a, x)


# ---------------------------------------------------------------------------
# waveform-similarity overlap-add: offset search + frame assembly
#
# Offsets are chosen once on a mono reference and reused for every channel
# so stereo images stay aligned. The search maximizes normalized correlation
# between each candidate frame and the natural continuation of the frame
# chosen before it.


def _wsola_offsets_py(x, n_out, speed, frame, hop, search, match):
    n = x.shape[0]
    max_start = n - frame
    n_frames = n_out // hop + 2
    starts = np.empty(n_frames, np.int64)
    prev = 0
    for k in range(n_frames):
        ideal = int(k * hop * speed + 0.5)
        if ideal > max_start:
            ideal = max_start
        if k == 0 or prev + hop + match > n:
            starts[k] = ideal
            prev = ideal
            continue
        ref_start = prev + hop
        lo = ideal - search
        hi = ideal + search
        if lo < 0:
            lo = 0
        if hi > max_start:
            hi = max_start
        best = ideal
        best_score = -1e30
        for c in range(lo, hi + 1):
            num = 0.0
            energy = 1e-12
            for j in range(match):
                v = x[c + j]
                num += x[ref_start + j] * v
                energy += v * v
            score = num / np.sqrt(energy)
            if score > best_score:
                best_score = score
                best = c
        starts[k] = best
        prev = best
    return starts


def _wsola_offsets_np(x, n_out, speed, frame, hop, search, match):
    n = x.shape[0]
    max_start = n - frame
    n_frames = n_out // hop + 2
    starts = np.empty(n_frames, np.int64)
    sq = np.concatenate(([0.0], np.cumsum(x * x)))
    prev = 0
    for k in range(n_frames):
        ideal = min(int(k * hop * speed + 0.5), max_start)
        if k == 0 or prev + hop + match > n:
            starts[k] = ideal
            prev = ideal
            continue
        ref_start = prev + hop
        lo = max(ideal - search, 0)
        hi = min(ideal + search, max_start)
        if hi <= lo:
            starts[k] = max(min(ideal, max_start), 0)
            prev = starts[k]
            continue
        ref = x[ref_start : ref_start + match]
        seg = x[lo : hi + match]
        corr = np.correlate(seg, ref, mode="valid")
        energies = sq[lo + match : hi + match + 1] - sq[lo : hi + 1]
        best = lo + int(np.argmax(corr / np.sqrt(energies + 1e-12)))
        starts[k] = best
        prev = best
    return starts


def _ola_assemble_py(x, starts, window, hop, n_out):
    frame = window.shape[0]
    out = np.zeros(n_out + frame + hop)
    norm = np.zeros(n_out + frame + hop)
    for k in range(starts.shape[0]):
        pos = k * hop
        s = starts[k]
        for j in range(frame):
            w = window[j]
            out[pos + j] += w * x[s + j]
            norm[pos + j] += w
    for i in range(n_out):
        if norm[i] > 1e-9:
            out[i] /= norm[i]
    return out[:n_out]


def _ola_assemble_np(x, starts, window, hop, n_out):
    frame = window.shape[0]
    out = np.zeros(n_out + frame + hop)
    norm = np.zeros(n_out + frame + hop)
    for k in range(starts.shape[0]):
        pos = k * hop
        s = starts[k]
        out[pos : pos + frame] += window * x[s : s + frame]
        norm[pos : pos + frame] += window
    out = out[:n_out]
    norm = norm[:n_out]
    return np.where(norm > 1e-9, out / np.where(norm > 1e-9, norm, 1.0), out)


# ---------------------------------------------------------------------------
# linear-interpolation resampling (playback-speed semantics)


def _resample_py(x, speed):
    n = x.shape[0]
    m = int(n / speed + 0.5)
    if m < 1:
        m = 1
    out = np.empty(m)
    for i in range(m):
        pos = i * speed
        i0 = int(pos)
        if i0 >= n - 1:
            out[i] = x[n - 1]
        else:
            frac = pos - i0
            out[i] = x[i0] * (1.0 - frac) + x[i0 + 1] * frac
    return out


def _resample_np(x, speed):
    n = x.shape[0]
    m = max(1, int(n / speed + 0.5))
    return np.interp(np.arange(m) * speed, np.arange(n), x)


# ---------------------------------------------------------------------------
# chorus: sinusoidally modulated fractional delay line


def _chorus_py(x, sr, rate_hz, depth_s, base_s, mix):
    n = x.shape[0]
    out = np.empty_like(x)
    step = 2.0 * np.pi * rate_hz / sr
    for i in range(n):
        pos = i - (base_s + depth_s * np.sin(step * i)) * sr
        if pos <= 0.0:
            delayed = 0.0
        else:
            i0 = int(pos)
            if i0 >= n - 1:
                delayed = x[n - 1]
            else:
                frac = pos - i0
                delayed = x[i0] * (1.0 - frac) + x[i0 + 1] * frac
        out[i] = (1.0 - mix) * x[i] + mix * delayed
    return out


def _chorus_np(x, sr, rate_hz, depth_s, base_s, mix):
    n = x.shape[0]
    idx = np.arange(n)
    pos = idx - (base_s + depth_s * np.sin(2.0 * np.pi * rate_hz / sr * idx)) * sr
    delayed = np.interp(np.clip(pos, 0.0, n - 1.0), idx, x)
    delayed = np.where(pos <= 0.0, 0.0, delayed)
    return (1.0 - mix) * x + mix * delayed


# ---------------------------------------------------------------------------
# lane dispatch

if USE_NUMBA:
    _biquad_nb = njit(cache=True)(_biquad_py)
    _comb_nb = njit(cache=True)(_comb_py)
    _allpass_nb = njit(cache=True)(_allpass_py)
    _wsola_offsets_nb = njit(cache=True)(_wsola_offsets_py)
    _ola_assemble_nb = njit(cache=True)(_ola_assemble_py)
    _resample_nb = njit(cache=True)(_resample_py)
    _chorus_nb = njit(cache=True)(_chorus_py)

    biquad = _biquad_nb
    feedback_comb = _comb_nb
    allpass = _allpass_nb
    wsola_offsets = _wsola_offsets_nb
    ola_assemble = _ola_assemble_nb
    resample_linear = _resample_nb
    chorus_mod_delay = _chorus_nb
else:
    biquad = _biquad_np
    feedback_comb = _comb_np
    allpass = _allpass_np
    wsola_offsets = _wsola_offsets_np
    ola_assemble = _ola_assemble_np
    resample_linear = _resample_np
    chorus_mod_delay = _chorus_np


def warmup():
    """Trigger JIT compilation on tiny inputs so later calls run at speed."""
    x = np.linspace(-0.1, 0.1, 256)
    biquad(x, 0.1, 0.2, 0.1, -0.5, 0.2)
    feedback_comb(x, 16, 0.5)
    allpass(x, 16, 0.5)
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(64) / 64)
    starts = wsola_offsets(x, 128, 2.0, 64, 32, 8, 16)
    ola_assemble(x, starts, window, 32, 128)
    resample_linear(x, 1.5)
    chorus_mod_delay(x, 8000, 1.5, 0.002, 0.005, 0.5)
