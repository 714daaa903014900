"""Prompt assembly, output parsing, and argument splitting."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopsmith.errors import ArityError, AssemblyError, ProtocolParseError, ValidationError
from loopsmith.protocol import (
    AgentFinal,
    AgentStep,
    Observation,
    PromptTemplate,
    assemble_prompt,
    load_default_template,
    parse_llm_output,
    render_final,
    render_history,
    render_step,
    split_args,
)
from loopsmith.tools import load_toolspecs


@pytest.fixture(scope="module")
def template():
    return load_default_template()


@pytest.fixture(scope="module")
def tools():
    return load_toolspecs()


class TestTemplate:
    def test_default_loads_with_all_placeholders(self, template):
        combined = template.system_prefix + template.system_format + template.system_suffix
        for name in ("tool_names", "ai_prefix", "chat_history", "input", "agent_scratchpad"):
            assert "{" + name + "}" in combined

    def test_missing_placeholder_rejected(self):
        with pytest.raises(AssemblyError, match="missing"):
            PromptTemplate("prefix", "format {tool_names} {ai_prefix}", "suffix {input}")

    def test_unknown_placeholder_rejected(self, template):
        with pytest.raises(AssemblyError, match="unknown"):
            PromptTemplate(
                template.system_prefix + " {mystery}",
                template.system_format,
                template.system_suffix,
            )


class TestAssemble:
    def test_fresh_prompt_ends_at_open_thought(self, template, tools):
        prompt = assemble_prompt(template, tools, [], "hello", [])
        assert prompt.endswith("Thought: Do I need to use a tool? ")

    def test_all_tool_names_present(self, template, tools):
        prompt = assemble_prompt(template, tools, [], "hello", [])
        for spec in tools:
            assert spec.name in prompt
        assert len(tools) == 12

    def test_single_scratchpad_entry_one_observation(self, template, tools):
        step = AgentStep("", tools[0].name, "some input")
        entry = [(step, Observation("Generated new music saved as music/ab12cd34.wav"))]
        prompt = assemble_prompt(template, tools, [], "hello", entry)
        # count in the live scratchpad region; the format block's own
        # "Observation: the result of the action" line is template text
        scratch_region = prompt[prompt.rfind("\nNew input: ") :]
        assert scratch_region.count("\nObservation: ") == 1
        assert prompt.endswith("Thought: Do I need to use a tool? ")

    def test_deterministic_and_growing(self, template, tools):
        base = assemble_prompt(template, tools, [], "hello", [])
        assert base == assemble_prompt(template, tools, [], "hello", [])
        entry = [(AgentStep("", tools[0].name, "x"), Observation("obs"))]
        assert len(assemble_prompt(template, tools, [], "hello", entry)) > len(base)

    def test_no_tools_rejected(self, template):
        with pytest.raises(AssemblyError):
            assemble_prompt(template, [], [], "hello", [])

    def test_no_unresolved_placeholders_remain(self, template, tools):
        prompt = assemble_prompt(template, tools, [("q", "a")], "hello", [])
        for name in ("{tool_names}", "{ai_prefix}", "{chat_history}", "{input}", "{agent_scratchpad}"):
            assert name not in prompt

    def test_history_truncated_to_limit(self):
        turns = [(f"q{i}", f"a{i}") for i in range(30)]
        text = render_history(turns, limit=20)
        assert "q9" not in text
        assert "q10" in text and "q29" in text
        assert text.count("Human: ") == 20


class TestParse:
    def test_tool_step(self):
        text = (
            "Thought: Do I need to use a tool? Yes\n"
            "Action: Generate music from user input text.\n"
            "Action Input: smooth rock music with guitar"
        )
        parsed = parse_llm_output(text)
        assert isinstance(parsed, AgentStep)
        assert parsed.action == "Generate music from user input text."
        assert parsed.action_input == "smooth rock music with guitar"

    def test_final_answer(self):
        text = "Thought: Do I need to use a tool? No\nAI: Here is your loop: music/c540d5a6.wav"
        parsed = parse_llm_output(text)
        assert isinstance(parsed, AgentFinal)
        assert parsed.response == "Here is your loop: music/c540d5a6.wav"

    def test_gibberish_raises_with_raw(self):
        with pytest.raises(ProtocolParseError) as excinfo:
            parse_llm_output("gibberish with no markers")
        assert excinfo.value.raw == "gibberish with no markers"

    def test_action_input_spans_lines_until_observation(self):
        text = (
            "Thought: Do I need to use a tool? Yes\n"
            "Action: Generate music from user input text.\n"
            "Action Input: a very\nwordy description\n"
            "Observation: should not be consumed"
        )
        parsed = parse_llm_output(text)
        assert parsed.action_input == "a very\nwordy description"

    def test_yes_without_action_is_error(self):
        with pytest.raises(ProtocolParseError, match="without an Action"):
            parse_llm_output("Thought: Do I need to use a tool? Yes\nnothing else")

    def test_no_without_ai_line_is_error(self):
        with pytest.raises(ProtocolParseError, match="AI response"):
            parse_llm_output("Thought: Do I need to use a tool? No\nnothing else")

    def test_markers_case_sensitive(self):
        with pytest.raises(ProtocolParseError):
            parse_llm_output("thought: do i need to use a tool? yes\naction: X\naction input: y")

    def test_empty_action_rejected(self):
        with pytest.raises(ValidationError):
            AgentStep("", "", "input")


_plain = st.text(
    alphabet=st.characters(blacklist_characters="\n\r", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=60,
).map(str.strip).filter(bool)


class TestRoundTrip:
    @settings(max_examples=200, deadline=None)
    @given(thought=_plain | st.just(""), action=_plain, action_input=_plain)
    def test_step_roundtrip(self, thought, action, action_input):
        step = AgentStep(thought, action, action_input)
        assert parse_llm_output(render_step(step)) == step

    @settings(max_examples=200, deadline=None)
    @given(thought=_plain | st.just(""), response=_plain)
    def test_final_roundtrip(self, thought, response):
        final = AgentFinal(thought, response)
        assert parse_llm_output(render_final(final)) == final


class TestSplitArgs:
    def test_trailing_commas_preserved(self):
        parts = split_args("music/ab12cd34.wav, add a saxophone, with vibrato", 2)
        assert parts == ["music/ab12cd34.wav", "add a saxophone, with vibrato"]

    def test_three_params(self):
        assert split_args("music/ab12cd34.wav, drums, remove", 3) == [
            "music/ab12cd34.wav",
            "drums",
            "remove",
        ]

    def test_too_few_commas(self):
        with pytest.raises(ArityError):
            split_args("no commas here", 2)

    def test_whitespace_trimmed(self):
        assert split_args("  music/c540d5a6.wav  ,  drums ", 2) == ["music/c540d5a6.wav", "drums"]

    def test_arity_one_returns_whole(self):
        assert split_args("anything, with, commas", 1) == ["anything, with, commas"]

    @settings(max_examples=100, deadline=None)
    @given(parts=st.lists(_plain.filter(lambda s: "," not in s), min_size=1, max_size=4))
    def test_reconstruction(self, parts):
        raw = ", ".join(parts)
        assert split_args(raw, len(parts)) == parts
