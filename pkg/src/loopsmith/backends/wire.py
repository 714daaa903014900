"""Byte-stream framing for remote backends.

One frame per message: 4-byte big-endian header length, JSON header,
8-byte big-endian payload length, WAV payload. Responses mirror requests
and carry a ``status`` field. ``separate`` responses pack several WAVs
into one payload, each preceded by its own 8-byte length.
"""

from __future__ import annotations

import json
import socket

from ..errors import BackendError

MAX_HEADER_BYTES = 1 << 20
MAX_PAYLOAD_BYTES = 1 << 31


def recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining > 0:
        chunk = sock.recv(min(remaining, 65536))
        if not chunk:
            raise BackendError("connection closed mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def send_frame(sock: socket.socket, header: dict, payload: bytes = b"") -> None:
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    sock.sendall(
        len(header_bytes).to_bytes(4, "big")
        + header_bytes
        + len(payload).to_bytes(8, "big")
        + payload
    )


def recv_frame(sock: socket.socket) -> tuple[dict, bytes]:
    header_len = int.from_bytes(recv_exact(sock, 4), "big")
    if header_len > MAX_HEADER_BYTES:
        raise BackendError(f"header length {header_len} exceeds limit")
    header = json.loads(recv_exact(sock, header_len).decode("utf-8"))
    payload_len = int.from_bytes(recv_exact(sock, 8), "big")
    if payload_len > MAX_PAYLOAD_BYTES:
        raise BackendError(f"payload length {payload_len} exceeds limit")
    payload = recv_exact(sock, payload_len) if payload_len else b""
    return header, payload


def pack_multi(payloads: list[bytes]) -> bytes:
    out = bytearray()
    for p in payloads:
        out += len(p).to_bytes(8, "big")
        out += p
    return bytes(out)


def unpack_multi(data: bytes, count: int) -> list[bytes]:
    out = []
    pos = 0
    for _ in range(count):
        if pos + 8 > len(data):
            raise BackendError("truncated multi-payload")
        size = int.from_bytes(data[pos : pos + 8], "big")
        pos += 8
        if pos + size > len(data):
            raise BackendError("truncated multi-payload")
        out.append(data[pos : pos + size])
        pos += size
    return out
