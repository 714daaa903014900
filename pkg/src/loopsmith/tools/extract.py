"""Keyword extraction of musical attributes from request text.

Blackboard updates come only from explicit text, never from audio
analysis, so wrong extractions stay visible and correctable in the
attribute panel. Matching is longest-first on word boundaries.
"""

from __future__ import annotations

import re

GENRES = (
    "hip hop", "rock", "jazz", "pop", "blues", "classical", "electronic", "lofi",
    "folk", "country", "metal", "ambient", "funk", "reggae", "techno", "house",
    "disco", "soul", "punk",
)

MOODS = (
    "melancholic", "energetic", "uplifting", "aggressive", "romantic", "relaxing",
    "smooth", "happy", "sad", "upbeat", "calm", "dark", "chill", "dreamy", "bright",
    "moody", "mellow",
)

INSTRUMENTS = (
    "snare drums", "snare drum", "saxophone", "harmonica", "trumpet", "violin",
    "guitar", "piano", "drums", "drum", "bass", "vocals", "flute", "synth",
    "organ", "cello", "strings", "brass", "ukulele", "sax",
)

# sax -> saxophone etc., so the table stays canonical
_INSTRUMENT_ALIASES = {"sax": "saxophone", "drum": "drums", "snare drum": "snare drums"}

_BPM_RE = re.compile(r"\b(\d{2,3})\s*bpm\b", re.IGNORECASE)
_KEY_RE = re.compile(r"\bin\s+([A-G][b#♭♯]?)\s+(major|minor)\b", re.IGNORECASE)


def _find_all(text: str, vocabulary: tuple[str, ...]) -> list[str]:
    """All vocabulary matches, longest-first, without overlapping spans."""
    low = text.lower()
    taken: list[tuple[int, int]] = []
    found: list[tuple[int, str]] = []
    for word in sorted(vocabulary, key=len, reverse=True):
        for m in re.finditer(rf"\b{re.escape(word)}\b", low):
            span = (m.start(), m.end())
            if any(s < span[1] and span[0] < e for s, e in taken):
                continue
            taken.append(span)
            found.append((span[0], word))
    return [w for _, w in sorted(found)]


def extract_genre(text: str) -> str | None:
    matches = _find_all(text, GENRES)
    return matches[0] if matches else None


def extract_mood(text: str) -> str | None:
    matches = _find_all(text, MOODS)
    return matches[0] if matches else None


def extract_instruments(text: str) -> list[str]:
    out = []
    for word in _find_all(text, INSTRUMENTS):
        canonical = _INSTRUMENT_ALIASES.get(word, word)
        if canonical not in out:
            out.append(canonical)
    return out


def extract_bpm(text: str) -> float | None:
    m = _BPM_RE.search(text)
    return float(m.group(1)) if m else None


def extract_key(text: str) -> str | None:
    m = _KEY_RE.search(text)
    return f"{m.group(1)} {m.group(2).lower()}" if m else None


def description_updates(desc: str) -> dict:
    """Blackboard updates a generation request text explicitly carries."""
    updates: dict = {"description": desc}
    genre = extract_genre(desc)
    if genre:
        updates["genre"] = genre
    mood = extract_mood(desc)
    if mood:
        updates["mood"] = mood
    instruments = extract_instruments(desc)
    if instruments:
        updates["instruments_add"] = instruments
    bpm = extract_bpm(desc)
    if bpm is not None and 20 <= bpm <= 400:  # ignore implausible tempo mentions
        updates["bpm"] = bpm
    key = extract_key(desc)
    if key is not None:
        updates["key"] = key
    return updates


def instrument_for_track(track_desc: str) -> str | None:
    """The instrument a new-track request names.

    Table match first; failing that, the last word between "add a/an" and
    "to"/"track" (dropping filler like "solo").
    """
    instruments = extract_instruments(track_desc)
    if instruments:
        return instruments[0]
    m = re.search(r"\badd\s+(?:a|an|some)?\s*(.+)", track_desc, re.IGNORECASE)
    if not m:
        return None
    segment = re.split(r"\b(?:to|track)\b", m.group(1), maxsplit=1)[0].strip()
    words = [w for w in re.findall(r"[a-z]+", segment.lower()) if w not in ("solo", "line", "part", "melody", "arrangement", "new")]
    return words[-1] if words else None
