from .buffer import AudioBuffer, mix, silence
from .store import ASSET_DIR, AssetStore, AudioAsset
from .wav import decode_wav, encode_wav

__all__ = [
    "AudioBuffer",
    "AudioAsset",
    "AssetStore",
    "ASSET_DIR",
    "decode_wav",
    "encode_wav",
    "mix",
    "silence",
]
