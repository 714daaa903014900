"""Registry dispatch and the twelve task implementations."""

import json
from importlib import resources

import numpy as np
import pytest

from loopsmith.audio import AssetStore, AudioBuffer, mix
from loopsmith.backends import MockBackend, ScriptedSimilarityBackend
from loopsmith.config import load_config
from loopsmith.errors import ValidationError
from loopsmith.gat import GlobalAttributeTable, apply_updates
from loopsmith.llm import ScriptedPlanner, load_planner_script
from loopsmith.tools import ToolContext, dispatch, load_registry, load_toolspecs
from loopsmith.tools.extract import (
    description_updates,
    extract_genre,
    extract_instruments,
    extract_mood,
    instrument_for_track,
)
from loopsmith.tools.gate import similarity_gate
from loopsmith.tools import impl

from oracles import band_energy, rms_db, sine

SR = 44100


@pytest.fixture
def ctx(tmp_path):
    config = load_config(asset_root=str(tmp_path), seed=11, loop_seconds=1.0)
    store = AssetStore(tmp_path, seed=11)
    log: list = []
    backends = {
        cap: MockBackend(seed=11, capabilities={cap}, sample_rate=SR, channels=2, call_log=log)
        for cap in ("generate", "continue", "inpaint", "separate", "caption", "similarity")
    }
    context = ToolContext(
        store=store,
        backends=backends,
        llm=ScriptedPlanner(load_planner_script(), call_log=log),
        config=config,
        gat=GlobalAttributeTable(),
    )
    context.log = log
    return context


@pytest.fixture
def registry():
    return load_registry()


def seeded_asset(ctx, freq=440, duration=1.0):
    buf = AudioBuffer(sine(freq, duration, SR, 0.4, 2).astype(np.float32), SR)
    return ctx.store.store(buf)


class TestRegistry:
    def test_contains_exactly_twelve_tools(self, registry):
        assert len(registry) == 12

    def test_names_and_descriptions_match_data_file(self, registry):
        raw = json.loads(
            (resources.files("loopsmith.tools") / "data" / "toolspecs.json").read_text("utf-8")
        )
        assert len(raw) == len(registry.specs)
        for entry, spec in zip(raw, registry.specs):
            assert entry["name"] == spec.name
            assert entry["description"] == spec.description

    def test_arity_matches_param_kinds(self):
        for spec in load_toolspecs():
            assert spec.arity == len(spec.param_kinds)


class TestDispatch:
    def test_unknown_tool(self, registry, ctx):
        result = dispatch(registry, "FooBar", "x", ctx)
        assert result.error
        assert "unknown tool: FooBar" in result.observation_text

    def test_wrong_arity_names_format(self, registry, ctx):
        result = dispatch(registry, "Shift the pitch of the given music.", "no-comma", ctx)
        assert result.error
        assert "The input to this tool should be" in result.observation_text

    def test_nonexistent_asset(self, registry, ctx):
        result = dispatch(registry, "Describe the current music.", "music/deadbeef.wav", ctx)
        assert result.error
        assert "nonexistent file music/deadbeef.wav" in result.observation_text

    def test_remove_track_three_args(self, registry, ctx):
        asset = seeded_asset(ctx)
        result = dispatch(
            registry,
            "Separate one track from a music file to extract (return the single track) or remove (return the mixture of the rest tracks) it.",
            f"{asset.relative_path}, drums, remove",
            ctx,
        )
        assert not result.error
        assert result.produced_asset is not None

    def test_padded_asset_path_resolves(self, registry, ctx):
        asset = seeded_asset(ctx)
        result = dispatch(registry, "Describe the current music.", f"  {asset.relative_path}  ", ctx)
        assert not result.error

    def test_non_numeric_semitones(self, registry, ctx):
        asset = seeded_asset(ctx)
        result = dispatch(
            registry, "Shift the pitch of the given music.", f"{asset.relative_path}, lots", ctx
        )
        assert result.error
        assert "integer" in result.observation_text


class TestTextToMusic:
    def test_generates_and_updates_gat(self, ctx):
        result = impl.text_to_music(ctx, "smooth rock music with guitar and snare drums")
        assert result.produced_asset is not None
        assert result.produced_asset.relative_path in result.observation_text
        assert result.gat_updates["description"].startswith("smooth rock")
        assert result.gat_updates["genre"] == "rock"
        assert result.gat_updates["mood"] == "smooth"
        assert set(result.gat_updates["instruments_add"]) == {"guitar", "snare drums"}
        assert ctx.store.contains(result.produced_asset.relative_path)

    def test_empty_description(self, ctx):
        with pytest.raises(ValidationError):
            impl.text_to_music(ctx, "  ")

    def test_deterministic_under_seed(self, ctx, tmp_path):
        a = impl.text_to_music(ctx, "rock")
        b = impl.text_to_music(ctx, "rock")
        buf_a = ctx.store.load(a.produced_asset)
        buf_b = ctx.store.load(b.produced_asset)
        assert np.array_equal(buf_a.samples, buf_b.samples)
        assert a.produced_asset.id != b.produced_asset.id

    def test_explicit_bpm_and_key_parsed(self, ctx):
        result = impl.text_to_music(ctx, "laid back groove at 90 bpm in Eb major")
        assert result.gat_updates["bpm"] == 90
        assert result.gat_updates["key"] == "Eb major"


class TestDrumPattern:
    def test_prefix_copied(self, ctx):
        drum = seeded_asset(ctx, freq=80, duration=2.0)
        result = impl.drum_pattern_to_music(ctx, drum, "rock with guitar")
        out = ctx.store.load(result.produced_asset)
        source = ctx.store.load(drum)
        n = source.length
        # 16-bit storage round-trip, so compare at quantization tolerance
        assert np.abs(out.samples[:, :n] - source.samples).max() <= 2**-14
        assert out.duration_seconds > source.duration_seconds

    def test_empty_desc(self, ctx):
        drum = seeded_asset(ctx)
        with pytest.raises(ValidationError):
            impl.drum_pattern_to_music(ctx, drum, "")


class TestImpression:
    def test_two_stage_chain_order_and_argument(self, ctx):
        result = impl.impression_to_music(ctx, "some description", "Hey Jude")
        ops = [entry for entry in ctx.log if entry[0] in ("llm.translate", "backend.generate")]
        assert ops[0] == ("llm.translate", "Hey Jude")
        assert ops[1] == ("backend.generate", "uplifting pop ballad with piano")
        assert "uplifting pop ballad with piano" in result.observation_text
        assert result.produced_asset is not None

    def test_empty_title(self, ctx):
        with pytest.raises(ValidationError):
            impl.impression_to_music(ctx, "desc", "   ")

    def test_stage1_failure_short_circuits(self, ctx):
        script = load_planner_script()
        script.impressions["Broken"] = ""
        ctx.llm = ScriptedPlanner(script, call_log=ctx.log)
        result = impl.impression_to_music(ctx, "desc", "Broken")
        assert result.error
        assert "stage 1" in result.observation_text
        assert not any(op == "backend.generate" for op, _ in ctx.log)


class TestRearrangeAndVariation:
    def test_rearrangement_differs_and_sets_genre(self, ctx):
        asset = seeded_asset(ctx)
        result = impl.stylistic_rearrangement(ctx, asset, "jazz with sax solo")
        assert result.gat_updates["genre"] == "jazz"
        out = ctx.store.load(result.produced_asset)
        assert not np.array_equal(out.samples, ctx.store.load(asset).samples)

    def test_variation_duration_and_freshness(self, ctx):
        asset = seeded_asset(ctx, duration=1.0)
        result = impl.music_variation(ctx, asset)
        out = ctx.store.load(result.produced_asset)
        assert abs(out.duration_seconds - 1.0) <= 0.05
        assert result.produced_asset.id != asset.id

    def test_variation_deterministic(self, ctx):
        asset = seeded_asset(ctx)
        a = impl.music_variation(ctx, asset)
        b = impl.music_variation(ctx, asset)
        assert np.array_equal(
            ctx.store.load(a.produced_asset).samples, ctx.store.load(b.produced_asset).samples
        )


class TestAddTrack:
    def _with_scores(self, ctx, scores, max_retries=4):
        ctx.backends = dict(ctx.backends)
        ctx.backends["similarity"] = ScriptedSimilarityBackend(scores)
        ctx.config = load_config(
            asset_root=str(ctx.store.root), seed=11, loop_seconds=1.0, max_retries=max_retries
        )
        return ctx

    def _continue_calls(self, ctx):
        return sum(1 for op, _ in ctx.log if op == "backend.continue")

    def test_passes_on_scripted_attempt_three(self, ctx):
        ctx = self._with_scores(ctx, [0.1, 0.2, 0.5], max_retries=5)
        asset = seeded_asset(ctx)
        before = self._continue_calls(ctx)
        result = impl.add_track(ctx, asset, "Add a saxophone solo to this music loop.")
        assert not result.error
        assert self._continue_calls(ctx) - before == 3
        assert "attempt 3" in result.observation_text

    def test_all_below_threshold_fails_after_max(self, ctx):
        ctx = self._with_scores(ctx, [0.1, 0.1, 0.1, 0.1], max_retries=4)
        asset = seeded_asset(ctx)
        before = self._continue_calls(ctx)
        result = impl.add_track(ctx, asset, "Add a saxophone solo to this music loop.")
        assert result.error
        assert self._continue_calls(ctx) - before == 4
        assert "0.10" in result.observation_text  # best score reported

    def test_instrument_update(self, ctx):
        ctx = self._with_scores(ctx, [0.9])
        asset = seeded_asset(ctx)
        result = impl.add_track(ctx, asset, "Add a saxophone solo to this music loop.")
        assert result.gat_updates["instruments_add"] == ["saxophone"]

    def test_gate_call_counts_exhaustive(self):
        # every pass/fail pattern of length 5 against threshold 0.3
        for pattern in range(32):
            scores = [0.5 if pattern & (1 << i) else 0.1 for i in range(5)]
            calls = []

            def make(attempt, calls=calls):
                calls.append(attempt)
                return None

            result = similarity_gate(make, lambda _: scores[len(calls) - 1], 0.3, 5)
            first_pass = next((i + 1 for i, s in enumerate(scores) if s >= 0.3), None)
            if first_pass is None:
                assert not result.accepted and len(calls) == 5
            else:
                assert result.accepted and len(calls) == first_pass


class TestRemoveTrack:
    def test_remove_drops_band_energy(self, ctx):
        # mock separation assigns 'drums' the band between nyquist/64 and nyquist/16
        nyq = SR / 2
        drums_band = (nyq / 64, nyq / 16)
        tone_in_band = seeded_asset(ctx, freq=600, duration=0.5)  # 600 Hz is inside
        result = impl.remove_track(ctx, tone_in_band, "drums", "remove")
        out = ctx.store.load(result.produced_asset)
        source = ctx.store.load(tone_in_band)
        before = band_energy(source.samples, SR, *drums_band)
        after = band_energy(out.samples, SR, *drums_band)
        assert 10 * np.log10((after + 1e-30) / before) <= -20

    def test_extract_plus_remove_reconstructs(self, ctx):
        asset = seeded_asset(ctx, freq=440, duration=0.5)
        source = ctx.store.load(asset)
        extracted = impl.remove_track(ctx, asset, "guitar", "extract")
        removed = impl.remove_track(ctx, asset, "guitar", "remove")
        together = mix(
            [ctx.store.load(extracted.produced_asset), ctx.store.load(removed.produced_asset)],
            [1.0, 1.0],
        )
        residual = together.samples.astype(np.float64) - source.samples.astype(np.float64)
        assert rms_db(residual) - rms_db(source.samples) <= -40

    def test_closed_stem_set(self, ctx):
        asset = seeded_asset(ctx)
        with pytest.raises(ValidationError, match="track name"):
            impl.remove_track(ctx, asset, "flute", "remove")
        with pytest.raises(ValidationError, match="mode"):
            impl.remove_track(ctx, asset, "drums", "detach")

    def test_gat_updates(self, ctx):
        ctx.gat = apply_updates(ctx.gat, {"instruments_add": ["drums", "guitar"]})
        asset = seeded_asset(ctx)
        removed = impl.remove_track(ctx, asset, "drums", "remove")
        assert removed.gat_updates["instruments_remove"] == ["drums"]
        extracted = impl.remove_track(ctx, asset, "guitar", "extract")
        assert "guitar" in extracted.gat_updates["stems"]


class TestInpaint:
    def test_outside_region_unchanged(self, ctx):
        asset = seeded_asset(ctx, duration=8.0)
        result = impl.inpaint(ctx, asset, 3.0, 5.0)
        out = ctx.store.load(result.produced_asset)
        source = ctx.store.load(asset)
        n0, n1 = int(3.0 * SR), int(5.0 * SR)
        assert np.array_equal(out.samples[:, :n0], source.samples[:, :n0])
        assert np.array_equal(out.samples[:, n1:], source.samples[:, n1:])

    def test_inverted_region(self, ctx):
        asset = seeded_asset(ctx)
        with pytest.raises(ValidationError, match="region"):
            impl.inpaint(ctx, asset, 5.0, 3.0)

    def test_region_beyond_duration(self, ctx):
        asset = seeded_asset(ctx, duration=1.0)
        with pytest.raises(ValidationError, match="region"):
            impl.inpaint(ctx, asset, 0.5, 2.0)


class TestSoundEffects:
    def test_reverb_rms_within_3db(self, ctx):
        asset = seeded_asset(ctx, duration=1.0)
        result = impl.add_sound_effect(ctx, asset, "add a reverb of recording studio to this music")
        out = ctx.store.load(result.produced_asset)
        source = ctx.store.load(asset)
        assert abs(rms_db(out.samples[:, : source.length]) - rms_db(source.samples)) <= 3.0

    def test_highpass_default_attenuates_low_tone(self, ctx):
        low = sine(100, 1.0, SR, 0.3, 2)
        high = sine(4000, 1.0, SR, 0.3, 2)
        asset = ctx.store.store(AudioBuffer((low + high).astype(np.float32), SR))
        result = impl.add_sound_effect(ctx, asset, "add a high pass filter")
        out = ctx.store.load(result.produced_asset)
        source = ctx.store.load(asset)
        from oracles import tone_level_db

        drop_low = tone_level_db(source.samples, SR, 100) - tone_level_db(out.samples, SR, 100)
        drop_high = tone_level_db(source.samples, SR, 4000) - tone_level_db(out.samples, SR, 4000)
        assert drop_low - drop_high >= 20

    def test_unrecognized_effect(self, ctx):
        asset = seeded_asset(ctx)
        result = impl.add_sound_effect(ctx, asset, "add sparkle dust")
        assert result.error
        assert "supported effects" in result.observation_text

    def test_multiple_effects_rejected(self, ctx):
        asset = seeded_asset(ctx)
        result = impl.add_sound_effect(ctx, asset, "add reverb and chorus")
        assert result.error

    def test_cutoff_qualifier_parsed(self, ctx):
        asset = seeded_asset(ctx)
        result = impl.add_sound_effect(ctx, asset, "add a low pass filter at 1.5 khz")
        assert "cutoff_hz=1500" in result.observation_text


class TestPitchAndStretch:
    def test_pitch_octave_up(self, ctx):
        from oracles import fft_peak_hz

        asset = seeded_asset(ctx, freq=440, duration=2.0)
        result = impl.pitch_shift(ctx, asset, 12)
        out = ctx.store.load(result.produced_asset)
        assert abs(fft_peak_hz(out.samples, SR) - 880) <= 0.01 * 880

    def test_pitch_zero_keeps_duration_and_key(self, ctx):
        asset = seeded_asset(ctx, duration=1.0)
        result = impl.pitch_shift(ctx, asset, 0)
        assert ctx.store.load(result.produced_asset).duration_seconds == pytest.approx(1.0, rel=0.01)
        assert "key" not in result.gat_updates  # key unset in context

    def test_pitch_key_bookkeeping(self, ctx):
        ctx.gat = apply_updates(ctx.gat, {"key": "E♭ major"})
        asset = seeded_asset(ctx)
        result = impl.pitch_shift(ctx, asset, 3)
        assert str(result.gat_updates["key"]) == "F♯ major"

    def test_pitch_range(self, ctx):
        asset = seeded_asset(ctx)
        with pytest.raises(ValidationError):
            impl.pitch_shift(ctx, asset, 30)

    def test_stretch_identity(self, ctx):
        asset = seeded_asset(ctx, duration=1.0)
        result = impl.time_stretch(ctx, asset, 1.0)
        assert ctx.store.load(result.produced_asset).length == ctx.store.load(asset).length

    def test_stretch_duration_arithmetic(self, ctx):
        asset = seeded_asset(ctx, duration=6.0)
        result = impl.time_stretch(ctx, asset, 1.5)
        assert abs(ctx.store.load(result.produced_asset).duration_seconds - 4.0) <= 0.08

    def test_stretch_preserves_pitch(self, ctx):
        from oracles import fft_peak_hz

        asset = seeded_asset(ctx, freq=440, duration=2.0)
        result = impl.time_stretch(ctx, asset, 1.5)
        out = ctx.store.load(result.produced_asset)
        cents = 1200 * np.log2(fft_peak_hz(out.samples, SR) / 440)
        assert abs(cents) <= 50

    def test_stretch_bpm_bookkeeping(self, ctx):
        ctx.gat = apply_updates(ctx.gat, {"bpm": 90})
        asset = seeded_asset(ctx)
        result = impl.time_stretch(ctx, asset, 1.5)
        assert result.gat_updates["bpm"] == 135

    def test_stretch_range(self, ctx):
        asset = seeded_asset(ctx)
        with pytest.raises(ValidationError):
            impl.time_stretch(ctx, asset, 9.0)


class TestCaption:
    def test_embeds_path_and_text(self, ctx):
        asset = seeded_asset(ctx)
        result = impl.caption(ctx, asset)
        assert asset.relative_path in result.observation_text
        assert "synthetic loop" in result.observation_text
        assert result.produced_asset is None

    def test_sets_description_only_when_unset(self, ctx):
        asset = seeded_asset(ctx)
        first = impl.caption(ctx, asset)
        assert "description" in first.gat_updates
        ctx.gat = apply_updates(ctx.gat, {"description": "already set"})
        second = impl.caption(ctx, asset)
        assert second.gat_updates == {}


class TestExtraction:
    def test_genre_mood(self):
        assert extract_genre("smooth rock music") == "rock"
        assert extract_mood("smooth rock music") == "smooth"
        assert extract_genre("laid back tune") is None

    def test_instruments_longest_match(self):
        found = extract_instruments("guitar and snare drums")
        assert found == ["guitar", "snare drums"]

    def test_instrument_for_track_table_match(self):
        assert instrument_for_track("Add a saxophone solo to this music loop.") == "saxophone"
        assert instrument_for_track("add piano arrangement to the given music") == "piano"

    def test_instrument_for_track_fallback(self):
        assert instrument_for_track("add a theremin to this music") == "theremin"

    def test_description_updates_skips_out_of_range_bpm(self):
        updates = description_updates("chiptune at 9000 bpm")
        assert "bpm" not in updates
