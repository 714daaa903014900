"""On-disk asset store: append-only WAV files under ``<root>/music/<id>.wav``."""

from __future__ import annotations

import random
import secrets
import threading
from dataclasses import dataclass
from pathlib import Path

from ..errors import NonexistentFileError, StorageError
from .buffer import AudioBuffer
from .wav import decode_wav, encode_wav

ASSET_DIR = "music"


@dataclass(frozen=True)
class AudioAsset:
    """Record of one stored loop file."""

    id: str
    relative_path: str
    sample_rate: int
    channels: int
    duration_seconds: float


class AssetStore:
    """Writable directory of loop files with collision-free 8-hex ids.

    Ids come from a seeded PRNG when ``seed`` is given (reproducible test
    fixtures) and from a CSPRNG otherwise. Assets are never overwritten;
    id allocation is atomic so concurrent stores are safe.
    """

    def __init__(self, root: str | Path, seed: int | None = None):
        self.root = Path(root)
        self._dir = self.root / ASSET_DIR
        self._dir.mkdir(parents=True, exist_ok=True)
        self._rng = random.Random(seed) if seed is not None else None
        self._lock = threading.Lock()
        self._assets: dict[str, AudioAsset] = {}
        self._used_ids: set[str] = {p.stem for p in self._dir.glob("*.wav")}

    def _fresh_id(self) -> str:
        """Allocate an unused 8-char lowercase hex id (caller holds no lock)."""
        with self._lock:
            while True:
                if self._rng is not None:
                    candidate = f"{self._rng.getrandbits(32):08x}"
                else:
                    candidate = secrets.token_hex(4)
                if candidate not in self._used_ids:
                    self._used_ids.add(candidate)
                    return candidate

    def store(self, buf: AudioBuffer, bit_depth: int | str = 16) -> AudioAsset:
        asset_id = self._fresh_id()
        relative = f"{ASSET_DIR}/{asset_id}.wav"
        target = self.root / relative
        try:
            data = encode_wav(buf, bit_depth)
            target.write_bytes(data)
        except OSError as exc:
            raise StorageError(f"cannot write {relative}: {exc}") from exc
        asset = AudioAsset(
            id=asset_id,
            relative_path=relative,
            sample_rate=buf.sample_rate,
            channels=buf.channels,
            duration_seconds=buf.duration_seconds,
        )
        with self._lock:
            self._assets[relative] = asset
        return asset

    def resolve(self, relative_path: str) -> AudioAsset:
        """Exact-path lookup; no fuzzy matching."""
        with self._lock:
            asset = self._assets.get(relative_path)
        if asset is None:
            raise NonexistentFileError(relative_path)
        return asset

    def contains(self, relative_path: str) -> bool:
        with self._lock:
            return relative_path in self._assets

    def load(self, asset: AudioAsset | str) -> AudioBuffer:
        relative = asset if isinstance(asset, str) else asset.relative_path
        record = self.resolve(relative)
        path = self.root / record.relative_path
        try:
            return decode_wav(path.read_bytes())
        except OSError as exc:
            raise StorageError(f"cannot read {relative}: {exc}") from exc

    def absolute_path(self, asset: AudioAsset | str) -> Path:
        relative = asset if isinstance(asset, str) else asset.relative_path
        return self.root / self.resolve(relative).relative_path

    def __len__(self) -> int:
        with self._lock:
            return len(self._assets)
