"""WAV codec: RIFF/WAVE with PCM 16-bit or IEEE-float 32-bit payloads.

The stdlib ``wave`` module rejects float WAVs, so the container is parsed
directly. Only the canonical 44-byte header layout is written; any chunk
ordering is accepted on read.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import DecodeError, EncodeError
from .buffer import AudioBuffer

_FORMAT_PCM = 1
_FORMAT_FLOAT = 3

# int16 full scale; 32767/32768 decodes to ~0.99997
_PCM16_SCALE = 32768.0


def decode_wav(data: bytes) -> AudioBuffer:
    """Parse WAV bytes into a float buffer scaled to [-1, 1]."""
    if len(data) < 12 or data[0:4] != b"RIFF":
        raise DecodeError("bad RIFF magic")
    if data[8:12] != b"WAVE":
        raise DecodeError("bad WAVE form type")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + chunk_size]
        if chunk_id in (b"fmt ", b"data") and len(body) < chunk_size:
            raise DecodeError(f"{chunk_id.decode().strip()} chunk truncated")
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise DecodeError("fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            payload = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned

    if fmt is None:
        raise DecodeError("missing fmt chunk")
    if payload is None:
        raise DecodeError("missing data chunk")

    audio_format, channels, sample_rate, _byte_rate, block_align, bits = fmt
    if channels not in (1, 2):
        raise DecodeError(f"unsupported channel count {channels}")
    if sample_rate <= 0:
        raise DecodeError(f"bad sample rate {sample_rate}")

    if audio_format == _FORMAT_PCM and bits == 16:
        raw = np.frombuffer(payload, dtype="<i2")
        samples = raw.astype(np.float32) / _PCM16_SCALE
    elif audio_format == _FORMAT_FLOAT and bits == 32:
        samples = np.frombuffer(payload, dtype="<f4").astype(np.float32)
    else:
        raise DecodeError(f"unsupported encoding: format {audio_format}, {bits}-bit")

    if block_align and block_align != channels * bits // 8:
        raise DecodeError(f"block align {block_align} inconsistent with format")
    if samples.size % channels != 0:
        samples = samples[: samples.size - samples.size % channels]
    frames = samples.reshape(-1, channels).T  # interleaved -> (channels, frames)
    return AudioBuffer(frames, sample_rate)


def encode_wav(buf: AudioBuffer, bit_depth: int | str = 16) -> bytes:
    """Serialize a buffer; ``bit_depth`` is 16 (PCM) or "32f" (IEEE float).

    16-bit quantization error is at most 2**-15 per sample.
    """
    if buf.length == 0:
        raise EncodeError("cannot encode an empty buffer")
    interleaved = buf.samples.T.reshape(-1)

    if bit_depth == 16:
        audio_format, bits = _FORMAT_PCM, 16
        clipped = np.clip(np.rint(interleaved.astype(np.float64) * _PCM16_SCALE), -32768, 32767)
        payload = clipped.astype("<i2").tobytes()
    elif bit_depth == "32f":
        audio_format, bits = _FORMAT_FLOAT, 32
        payload = np.clip(interleaved, -1.0, 1.0).astype("<f4").tobytes()
    else:
        raise EncodeError(f"unsupported bit depth {bit_depth!r} (use 16 or '32f')")

    channels = buf.channels
    block_align = channels * bits // 8
    byte_rate = buf.sample_rate * block_align
    header = b"RIFF" + struct.pack("<I", 36 + len(payload)) + b"WAVE"
    header += b"fmt " + struct.pack(
        "<IHHIIHH", 16, audio_format, channels, buf.sample_rate, byte_rate, block_align, bits
    )
    header += b"data" + struct.pack("<I", len(payload))
    return header + payload
