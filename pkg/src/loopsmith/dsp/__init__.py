from .bands import band_split
from .effects import EFFECT_DEFAULTS, EFFECT_KINDS, EffectParams, apply_effect
from .kernels import USE_NUMBA, warmup
from .pitch_time import pitch_shift_buffer, time_stretch_buffer

__all__ = [
    "EFFECT_DEFAULTS",
    "EFFECT_KINDS",
    "EffectParams",
    "USE_NUMBA",
    "apply_effect",
    "band_split",
    "pitch_shift_buffer",
    "time_stretch_buffer",
    "warmup",
]
