"""Client for model servers speaking the length-prefixed WAV wire protocol."""

from __future__ import annotations

import socket
import threading

from ..audio import AudioBuffer, decode_wav, encode_wav
from ..errors import BackendError
from ..gat import STEM_NAMES
from .base import BackendConfig, GenerativeBackend
from .wire import pack_multi, recv_frame, send_frame, unpack_multi


def _parse_endpoint(endpoint: str) -> tuple[str, int]:
    host, _, port = endpoint.rpartition(":")
    if not host or not port.isdigit():
        raise BackendError(f"bad endpoint {endpoint!r}, expected host:port")
    return host, int(port)


class RemoteBackend(GenerativeBackend):
    """One round trip per call; the connection is pooled across calls."""

    def __init__(self, config: BackendConfig, capabilities):
        if config.kind != "remote":
            raise BackendError("RemoteBackend requires a remote BackendConfig")
        self.config = config
        self.capabilities = frozenset(capabilities)
        self._host, self._port = _parse_endpoint(config.endpoint)
        self._sock: socket.socket | None = None
        self._lock = threading.Lock()

    def _connect(self) -> socket.socket:
        sock = socket.create_connection((self._host, self._port), timeout=self.config.timeout_s)
        sock.settimeout(self.config.timeout_s)
        return sock

    def _close_locked(self) -> None:
        if self._sock is not None:
            try:
                self._sock.close()
            finally:
                self._sock = None

    def close(self) -> None:
        with self._lock:
            self._close_locked()

    def _roundtrip(self, header: dict, payload: bytes = b"") -> tuple[dict, bytes]:
        with self._lock:
            try:
                if self._sock is None:
                    self._sock = self._connect()
                send_frame(self._sock, header, payload)
                response, response_payload = recv_frame(self._sock)
            except (OSError, BackendError) as exc:
                self._close_locked()
                raise BackendError(f"remote backend {self._host}:{self._port}: {exc}") from exc
        if response.get("status") != "ok":
            raise BackendError(
                f"remote backend error: {response.get('message', 'unspecified failure')}"
            )
        return response, response_payload

    def generate(self, desc: str, duration_s: float, variant: int = 0) -> AudioBuffer:
        self._require("generate")
        _, payload = self._roundtrip(
            {"op": "generate", "text": desc, "params": {"duration_s": duration_s, "variant": variant}}
        )
        return decode_wav(payload)

    def continue_audio(self, prefix: AudioBuffer, desc: str, total_s: float, variant: int = 0) -> AudioBuffer:
        self._require("continue")
        _, payload = self._roundtrip(
            {"op": "continue", "text": desc, "params": {"total_s": total_s, "variant": variant}},
            encode_wav(prefix, "32f"),
        )
        return decode_wav(payload)

    def inpaint_region(self, buf: AudioBuffer, start_s: float, end_s: float, desc: str) -> AudioBuffer:
        self._require("inpaint")
        _, payload = self._roundtrip(
            {"op": "inpaint", "text": desc, "params": {"start_s": start_s, "end_s": end_s}},
            encode_wav(buf, "32f"),
        )
        return decode_wav(payload)

    def separate(self, buf: AudioBuffer) -> dict[str, AudioBuffer]:
        self._require("separate")
        header, payload = self._roundtrip({"op": "separate", "text": "", "params": {}}, encode_wav(buf, "32f"))
        names = header.get("stems", list(STEM_NAMES))
        wavs = unpack_multi(payload, len(names))
        return {name: decode_wav(data) for name, data in zip(names, wavs)}

    def caption_audio(self, buf: AudioBuffer) -> str:
        self._require("caption")
        header, _ = self._roundtrip({"op": "caption", "text": "", "params": {}}, encode_wav(buf, "32f"))
        text = header.get("text", "")
        if not text:
            raise BackendError("remote captioner returned empty text")
        return text

    def similarity(self, buf: AudioBuffer, desc: str) -> float:
        self._require("similarity")
        header, _ = self._roundtrip({"op": "similarity", "text": desc, "params": {}}, encode_wav(buf, "32f"))
        if "score" not in header:
            raise BackendError("remote similarity response missing score")
        return float(header["score"])


def serve_backend(backend: GenerativeBackend, host: str = "127.0.0.1", port: int = 0):
    """Expose any backend over the wire protocol; returns (server, port).

    This is the thin adapter real model deployments would wrap; here it is
    exercised with mocks to validate framing end to end. Call
    ``server.shutdown()`` to stop.
    """
    import socketserver

    class Handler(socketserver.BaseRequestHandler):
        def handle(self):
            while True:
                try:
                    header, payload = recv_frame(self.request)
                except BackendError:
                    return
                try:
                    response, response_payload = _dispatch(backend, header, payload)
                except Exception as exc:  # surfaced to the client, not fatal here
                    response, response_payload = {"status": "error", "message": str(exc)}, b""
                try:
                    send_frame(self.request, response, response_payload)
                except OSError:
                    return

    class Server(socketserver.ThreadingTCPServer):
        allow_reuse_address = True
        daemon_threads = True

    server = Server((host, port), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, server.server_address[1]


def _dispatch(backend: GenerativeBackend, header: dict, payload: bytes) -> tuple[dict, bytes]:
    op = header.get("op")
    params = header.get("params", {})
    text = header.get("text", "")
    if op == "generate":
        buf = backend.generate(text, params["duration_s"], int(params.get("variant", 0)))
        return {"status": "ok"}, encode_wav(buf, "32f")
    if op == "continue":
        prefix = decode_wav(payload)
        buf = backend.continue_audio(prefix, text, params["total_s"], int(params.get("variant", 0)))
        return {"status": "ok"}, encode_wav(buf, "32f")
    if op == "inpaint":
        buf = backend.inpaint_region(decode_wav(payload), params["start_s"], params["end_s"], text)
        return {"status": "ok"}, encode_wav(buf, "32f")
    if op == "separate":
        stems = backend.separate(decode_wav(payload))
        names = list(stems)
        return {"status": "ok", "stems": names}, pack_multi([encode_wav(stems[n], "32f") for n in names])
    if op == "caption":
        return {"status": "ok", "text": backend.caption_audio(decode_wav(payload))}, b""
    if op == "similarity":
        return {"status": "ok", "score": backend.similarity(decode_wav(payload), text)}, b""
    return {"status": "error", "message": f"unknown operation {op!r}"}, b""
