"""The blackboard: a versioned table of the loop's musical attributes.

Every component reads from and writes to this one table so that bpm, key,
genre, mood, instruments and track assets stay coherent across dialogue
rounds. Tables are immutable values; updates produce new tables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .audio import AudioAsset
from .errors import ValidationError

BPM_MIN = 20.0
BPM_MAX = 400.0
SPEED_FACTOR_MIN = 0.25
SPEED_FACTOR_MAX = 4.0

STEM_NAMES = ("vocals", "drums", "bass", "guitar", "piano", "other")

# Canonical spellings: flats for classes 1/3/8/10, F♯ for class 6.
_PITCH_NAMES = ("C", "D♭", "D", "E♭", "E", "F", "F♯", "G", "A♭", "A", "B♭", "B")
_NATURALS = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}
_MODES = ("major", "minor")

_UPDATE_FIELDS = (
    "bpm",
    "key",
    "genre",
    "mood",
    "description",
    "instruments_add",
    "instruments_remove",
    "mix",
    "stems",
)


@dataclass(frozen=True)
class MusicalKey:
    """Pitch class (0 = C) plus mode, spelled canonically."""

    pitch_class: int
    mode: str

    def __str__(self) -> str:
        return f"{_PITCH_NAMES[self.pitch_class % 12]} {self.mode}"


def parse_key(text: str | MusicalKey) -> MusicalKey:
    """Parse spellings like "E♭ major", "Eb major" or "f# minor"."""
    if isinstance(text, MusicalKey):
        return text
    m = re.fullmatch(r"\s*([A-Ga-g])\s*([#♯b♭]?)\s+(\w+)\s*", text)
    if not m:
        raise ValidationError(f"unknown key spelling {text!r}")
    letter, accidental, mode = m.groups()
    mode = mode.lower()
    if mode not in _MODES:
        raise ValidationError(f"unknown mode {mode!r} (expected one of {_MODES})")
    pc = _NATURALS[letter.upper()]
    if accidental in ("#", "♯"):
        pc += 1
    elif accidental in ("b", "♭"):
        pc -= 1
    return MusicalKey(pc % 12, mode)


def transpose_key(key: MusicalKey | str | None, semitones: int) -> MusicalKey | None:
    """Advance the pitch class by ``semitones`` mod 12; mode unchanged.

    An unset key stays unset; there is nothing to transpose.
    """
    if key is None:
        return None
    if abs(semitones) > 24:
        raise ValidationError(f"semitones out of range: {semitones} (|n| <= 24)")
    parsed = parse_key(key)
    return MusicalKey((parsed.pitch_class + semitones) % 12, parsed.mode)


@dataclass(frozen=True)
class ScaledBpm:
    value: float
    clamped: bool


def scale_bpm(bpm: float, speed_factor: float) -> ScaledBpm:
    """Scale tempo by a playback-speed factor, clamping into [20, 400]."""
    if speed_factor <= 0:
        raise ValidationError(f"speed factor must be positive, got {speed_factor}")
    if not SPEED_FACTOR_MIN <= speed_factor <= SPEED_FACTOR_MAX:
        raise ValidationError(
            f"speed factor {speed_factor} outside [{SPEED_FACTOR_MIN}, {SPEED_FACTOR_MAX}]"
        )
    raw = bpm * speed_factor
    clamped = min(max(raw, BPM_MIN), BPM_MAX)
    return ScaledBpm(clamped, clamped != raw)


def _validate_bpm(bpm: float) -> float:
    bpm = float(bpm)
    if not BPM_MIN <= bpm <= BPM_MAX:
        raise ValidationError(f"bpm {bpm} outside [{BPM_MIN}, {BPM_MAX}]")
    return bpm


@dataclass(frozen=True)
class GlobalAttributeTable:
    """Current musical attributes of the loop under construction."""

    bpm: float | None = None
    key: MusicalKey | None = None
    genre: str | None = None
    mood: str | None = None
    instruments: tuple[str, ...] = ()
    description: str | None = None
    mix: AudioAsset | None = None
    stems: dict[str, AudioAsset] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Serialization used by the service state endpoint (stable names)."""
        return {
            "bpm": self.bpm,
            "key": str(self.key) if self.key is not None else None,
            "genre": self.genre,
            "mood": self.mood,
            "instruments": list(self.instruments),
            "description": self.description,
            "tracks": {
                "mix": self.mix.relative_path if self.mix else None,
                "stems": {name: a.relative_path for name, a in sorted(self.stems.items())},
            },
        }


def apply_updates(gat: GlobalAttributeTable, updates: dict) -> GlobalAttributeTable:
    """Return a new table with ``updates`` merged in.

    Unspecified fields are unchanged. Instrument updates are set-merge
    (``instruments_add``) and set-difference (``instruments_remove``), both
    preserving first-seen order. The input table is never mutated.
    """
    unknown = set(updates) - set(_UPDATE_FIELDS)
    if unknown:
        raise ValidationError(f"unknown attribute fields: {sorted(unknown)}")

    changes: dict = {}
    if "bpm" in updates:
        changes["bpm"] = None if updates["bpm"] is None else _validate_bpm(updates["bpm"])
    if "key" in updates:
        changes["key"] = None if updates["key"] is None else parse_key(updates["key"])
    for name in ("genre", "mood", "description"):
        if name in updates:
            changes[name] = updates[name]
    if "mix" in updates:
        changes["mix"] = updates["mix"]

    if "instruments_add" in updates or "instruments_remove" in updates:
        removed = {i.lower() for i in updates.get("instruments_remove", ())}
        merged = [i for i in gat.instruments if i.lower() not in removed]
        for inst in updates.get("instruments_add", ()):
            inst = inst.strip().lower()
            if inst and inst not in merged:
                merged.append(inst)
        changes["instruments"] = tuple(merged)

    if "stems" in updates:
        allowed = set(STEM_NAMES) | {i.lower() for i in changes.get("instruments", gat.instruments)}
        new_stems = dict(gat.stems)
        for name, asset in updates["stems"].items():
            if name.lower() not in allowed:
                raise ValidationError(f"unrecognized stem name {name!r}")
            new_stems[name.lower()] = asset
        changes["stems"] = new_stems

    return replace(gat, **changes)


def render_context(gat: GlobalAttributeTable) -> str:
    """One deterministic paragraph of all set fields, for backend conditioning."""
    parts = []
    if gat.bpm is not None:
        parts.append(f"bpm: {gat.bpm:g}")
    if gat.key is not None:
        parts.append(f"key: {gat.key}")
    if gat.genre:
        parts.append(f"genre: {gat.genre}")
    if gat.mood:
        parts.append(f"mood: {gat.mood}")
    if gat.instruments:
        parts.append("instruments: " + ", ".join(gat.instruments))
    if gat.description:
        parts.append(f"description: {gat.description}")
    if not parts:
        return "no attributes recorded"
    return "; ".join(parts)


class GatHistory:
    """Append-only snapshots, one per completed turn."""

    def __init__(self):
        self._snapshots: list[tuple[int, GlobalAttributeTable]] = []

    def append(self, turn_index: int, gat: GlobalAttributeTable) -> None:
        if self._snapshots and turn_index <= self._snapshots[-1][0]:
            raise ValidationError(
                f"turn index {turn_index} not after {self._snapshots[-1][0]}"
            )
        self._snapshots.append((turn_index, gat))

    @property
    def snapshots(self) -> list[tuple[int, GlobalAttributeTable]]:
        return list(self._snapshots)

    def __len__(self) -> int:
        return len(self._snapshots)
