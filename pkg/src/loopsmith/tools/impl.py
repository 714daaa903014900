"""The twelve task implementations behind the registry.

Each returns a ToolResult whose observation embeds any produced asset path
(always as the last path in the text) and whose gat_updates carry the
explicit blackboard changes this call justifies.
"""

from __future__ import annotations

import re

from ..audio import AudioAsset, mix
from ..dsp import EFFECT_DEFAULTS, EffectParams, apply_effect, pitch_shift_buffer, time_stretch_buffer
from ..errors import TransportError, ValidationError
from ..gat import STEM_NAMES, scale_bpm, transpose_key
from .extract import description_updates, instrument_for_track
from .gate import similarity_gate
from .registry import ToolContext, ToolResult

_EFFECT_ROUTES = (
    ("high pass", "highpass"),
    ("high-pass", "highpass"),
    ("highpass", "highpass"),
    ("low pass", "lowpass"),
    ("low-pass", "lowpass"),
    ("lowpass", "lowpass"),
    ("reverb", "reverb"),
    ("chorus", "chorus"),
)

_ROOM_WORDS = (
    ("cathedral", 0.95),
    ("church", 0.9),
    ("hall", 0.75),
    ("club", 0.6),
    ("pub", 0.55),
    ("room", 0.5),
    ("studio", 0.4),
)

_CUTOFF_RE = re.compile(r"(\d+(?:\.\d+)?)\s*(k?)hz", re.IGNORECASE)


def text_to_music(ctx: ToolContext, desc: str) -> ToolResult:
    if not desc.strip():
        raise ValidationError("description must be non-empty")
    buf = ctx.backends["generate"].generate(desc, ctx.config.loop_seconds)
    asset = ctx.store.store(buf)
    updates = description_updates(desc)
    updates["mix"] = asset
    return ToolResult(
        observation_text=f"Generated new music from description: {desc}; saved as {asset.relative_path}",
        produced_asset=asset,
        gat_updates=updates,
    )


def drum_pattern_to_music(ctx: ToolContext, drum: AudioAsset, desc: str) -> ToolResult:
    if not desc.strip():
        raise ValidationError("description must be non-empty")
    prefix = ctx.store.load(drum)
    total = prefix.duration_seconds + ctx.config.loop_seconds
    buf = ctx.backends["continue"].continue_audio(prefix, desc, total)
    asset = ctx.store.store(buf)
    updates = description_updates(desc)
    updates["mix"] = asset
    return ToolResult(
        observation_text=(
            f"Generated music from the drum pattern {drum.relative_path} guided by: {desc}; "
            f"saved as {asset.relative_path}"
        ),
        produced_asset=asset,
        gat_updates=updates,
    )


def impression_to_music(ctx: ToolContext, desc_hint: str, title: str) -> ToolResult:
    if not title.strip():
        raise ValidationError("impression title must be non-empty")
    try:
        derived = ctx.llm.translate_impression(title)
    except (ValidationError, TransportError) as exc:
        return ToolResult(f"Error: impression translation failed (stage 1): {exc}", error=True)
    if not derived.strip():
        return ToolResult(
            "Error: impression translation failed (stage 1): empty description", error=True
        )
    try:
        buf = ctx.backends["generate"].generate(derived, ctx.config.loop_seconds)
    except Exception as exc:
        return ToolResult(f"Error: music generation failed (stage 2): {exc}", error=True)
    asset = ctx.store.store(buf)
    updates = description_updates(derived)
    updates["mix"] = asset
    return ToolResult(
        observation_text=(
            f"Translated impression '{title}' into: {derived}; generated new music saved as "
            f"{asset.relative_path}"
        ),
        produced_asset=asset,
        gat_updates=updates,
    )


def stylistic_rearrangement(ctx: ToolContext, asset: AudioAsset, style_desc: str) -> ToolResult:
    if not style_desc.strip():
        raise ValidationError("style description must be non-empty")
    source = ctx.store.load(asset)
    desc = style_desc
    if ctx.gat.description:
        desc = f"{style_desc} (rearrangement of: {ctx.gat.description})"
    buf = ctx.backends["generate"].generate(desc, source.duration_seconds)
    new_asset = ctx.store.store(buf)
    updates: dict = {"mix": new_asset}
    from .extract import extract_genre

    genre = extract_genre(style_desc)
    if genre:
        updates["genre"] = genre
    return ToolResult(
        observation_text=(
            f"Rearranged {asset.relative_path} with style: {style_desc}; saved as "
            f"{new_asset.relative_path}"
        ),
        produced_asset=new_asset,
        gat_updates=updates,
    )


def music_variation(ctx: ToolContext, asset: AudioAsset) -> ToolResult:
    source = ctx.store.load(asset)
    desc = ctx.gat.description or "variation"
    buf = ctx.backends["inpaint"].inpaint_region(source, 0.0, source.duration_seconds, desc)
    new_asset = ctx.store.store(buf)
    return ToolResult(
        observation_text=(
            f"Generated a variation of {asset.relative_path}; saved as {new_asset.relative_path}"
        ),
        produced_asset=new_asset,
        gat_updates={"mix": new_asset},
    )


def add_track(ctx: ToolContext, asset: AudioAsset, track_desc: str) -> ToolResult:
    if not track_desc.strip():
        raise ValidationError("track description must be non-empty")
    prefix = ctx.store.load(asset)
    total = 2.0 * prefix.duration_seconds
    generator = ctx.backends["continue"]
    scorer = ctx.backends["similarity"]
    gate = similarity_gate(
        make_candidate=lambda attempt: generator.continue_audio(prefix, track_desc, total, variant=attempt),
        score=lambda buf: scorer.similarity(buf, track_desc),
        threshold=ctx.config.similarity_threshold,
        max_retries=ctx.config.max_retries,
    )
    if not gate.accepted:
        return ToolResult(
            observation_text=(
                f"Error: could not add track after {gate.attempts} attempts; best similarity "
                f"{gate.best_score:.2f} below threshold {ctx.config.similarity_threshold:.2f}"
            ),
            error=True,
        )
    new_asset = ctx.store.store(gate.candidate)
    updates: dict = {"mix": new_asset}
    instrument = instrument_for_track(track_desc)
    if instrument:
        updates["instruments_add"] = [instrument]
    return ToolResult(
        observation_text=(
            f"Added new track to {asset.relative_path} (similarity {gate.scores[-1]:.2f} on attempt "
            f"{gate.attempts}); updated music saved as {new_asset.relative_path}"
        ),
        produced_asset=new_asset,
        gat_updates=updates,
    )


def remove_track(ctx: ToolContext, asset: AudioAsset, stem: str, mode: str) -> ToolResult:
    stem = stem.strip().lower()
    mode = mode.strip().lower()
    if stem not in STEM_NAMES:
        raise ValidationError(f"track name must be one of {', '.join(STEM_NAMES)}; got '{stem}'")
    if mode not in ("extract", "remove"):
        raise ValidationError(f"mode must be 'extract' or 'remove'; got '{mode}'")
    source = ctx.store.load(asset)
    stems = ctx.backends["separate"].separate(source)
    if mode == "extract":
        out = stems[stem]
        new_asset = ctx.store.store(out)
        updates = {"mix": new_asset, "stems": {stem: new_asset}}
        text = f"Extracted {stem} from {asset.relative_path}; saved as {new_asset.relative_path}"
    else:
        rest = [buf for name, buf in stems.items() if name != stem]
        out = mix(rest, [1.0] * len(rest))
        new_asset = ctx.store.store(out)
        updates = {"mix": new_asset, "instruments_remove": [stem]}
        text = (
            f"Removed {stem} from {asset.relative_path}; remaining mix saved as "
            f"{new_asset.relative_path}"
        )
    return ToolResult(observation_text=text, produced_asset=new_asset, gat_updates=updates)


def inpaint(ctx: ToolContext, asset: AudioAsset, start_s: float, end_s: float) -> ToolResult:
    source = ctx.store.load(asset)
    if not (0 <= start_s < end_s <= source.duration_seconds + 1e-9):
        raise ValidationError(
            f"invalid region [{start_s:g}s, {end_s:g}s) for a "
            f"{source.duration_seconds:.2f}s music file"
        )
    desc = ctx.gat.description or "regenerate"
    buf = ctx.backends["inpaint"].inpaint_region(source, start_s, end_s, desc)
    new_asset = ctx.store.store(buf)
    return ToolResult(
        observation_text=(
            f"Regenerated the {start_s:g}s-{end_s:g}s region of {asset.relative_path}; saved as "
            f"{new_asset.relative_path}"
        ),
        produced_asset=new_asset,
        gat_updates={"mix": new_asset},
    )


def _route_effect(request: str) -> tuple[str | None, str | None]:
    low = request.lower()
    kinds = {kind for keyword, kind in _EFFECT_ROUTES if keyword in low}
    if not kinds:
        return None, "no recognized sound effect in request; supported effects: reverb, high-pass filter, low-pass filter, chorus"
    if len(kinds) > 1:
        return None, f"request names multiple effects ({', '.join(sorted(kinds))}); name exactly one"
    return kinds.pop(), None


def _effect_overrides(kind: str, request: str) -> dict:
    low = request.lower()
    overrides: dict = {}
    if kind in ("highpass", "lowpass"):
        m = _CUTOFF_RE.search(low)
        if m:
            cutoff = float(m.group(1)) * (1000.0 if m.group(2) else 1.0)
            overrides["cutoff_hz"] = cutoff
    elif kind == "reverb":
        for word, room in _ROOM_WORDS:
            if word in low:
                overrides["room"] = room
                break
    return overrides


def add_sound_effect(ctx: ToolContext, asset: AudioAsset, request: str) -> ToolResult:
    kind, problem = _route_effect(request)
    if problem:
        return ToolResult(f"Error: {problem}", error=True)
    params = EffectParams(kind, _effect_overrides(kind, request))
    source = ctx.store.load(asset)
    out = apply_effect(source, params)
    new_asset = ctx.store.store(out)
    settings = ", ".join(f"{k}={v:g}" for k, v in sorted(params.params.items()))
    return ToolResult(
        observation_text=(
            f"Applied {kind} ({settings}) to {asset.relative_path}; saved as "
            f"{new_asset.relative_path}"
        ),
        produced_asset=new_asset,
        gat_updates={"mix": new_asset},
    )


def pitch_shift(ctx: ToolContext, asset: AudioAsset, semitones: int) -> ToolResult:
    if abs(semitones) > 24:
        raise ValidationError(f"pitch shift {semitones} outside [-24, 24] semitones")
    source = ctx.store.load(asset)
    out = pitch_shift_buffer(source, semitones)
    new_asset = ctx.store.store(out)
    updates: dict = {"mix": new_asset}
    if ctx.gat.key is not None:
        updates["key"] = transpose_key(ctx.gat.key, semitones)
    return ToolResult(
        observation_text=(
            f"Shifted the pitch of {asset.relative_path} by {semitones:+d} semitones; saved as "
            f"{new_asset.relative_path}"
        ),
        produced_asset=new_asset,
        gat_updates=updates,
    )


def time_stretch(ctx: ToolContext, asset: AudioAsset, factor: float) -> ToolResult:
    source = ctx.store.load(asset)
    out = time_stretch_buffer(source, factor)  # validates the factor range
    new_asset = ctx.store.store(out)
    updates: dict = {"mix": new_asset}
    if ctx.gat.bpm is not None:
        updates["bpm"] = scale_bpm(ctx.gat.bpm, factor).value
    return ToolResult(
        observation_text=(
            f"Stretched the time of {asset.relative_path} by {factor:g}; saved as "
            f"{new_asset.relative_path}"
        ),
        produced_asset=new_asset,
        gat_updates=updates,
    )


def caption(ctx: ToolContext, asset: AudioAsset) -> ToolResult:
    buf = ctx.store.load(asset)
    text = ctx.backends["caption"].caption_audio(buf)
    updates = {} if ctx.gat.description else {"description": text}
    return ToolResult(
        observation_text=f"Music {asset.relative_path}: {text}",
        gat_updates=updates,
    )


IMPLEMENTATIONS = {
    "text_to_music": text_to_music,
    "drum_pattern_to_music": drum_pattern_to_music,
    "impression_to_music": impression_to_music,
    "stylistic_rearrangement": stylistic_rearrangement,
    "music_variation": music_variation,
    "add_track": add_track,
    "remove_track": remove_track,
    "inpaint": inpaint,
    "add_sound_effect": add_sound_effect,
    "pitch_shift": pitch_shift,
    "time_stretch": time_stretch,
    "caption": caption,
}
