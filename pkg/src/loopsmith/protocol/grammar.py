"""The engine <-> language-model text grammar.

Prompts are assembled from three template files (prefix, tool format,
suffix) shipped as package data, and model output is parsed back into
either a tool step or a final answer. Parsing is line-oriented and
case-sensitive on the markers; a strict parser plus a bounded retry is far
easier to debug than one that silently accepts drifting output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from ..errors import ArityError, AssemblyError, ProtocolParseError, ValidationError

AI_PREFIX = "AI"
THOUGHT_MARKER = "Thought:"
ACTION_MARKER = "Action:"
ACTION_INPUT_MARKER = "Action Input:"
OBSERVATION_MARKER = "Observation:"
TOOL_QUESTION = "Do I need to use a tool?"

# Appended when re-prompting after unparseable output.
FORMAT_CORRECTION = "You MUST strictly follow the format."

PLACEHOLDERS = ("tool_names", "ai_prefix", "chat_history", "input", "agent_scratchpad")

HISTORY_LIMIT_DEFAULT = 20


@dataclass(frozen=True)
class AgentStep:
    """One parsed tool request: thought text, tool name, raw argument string."""

    thought: str
    action: str
    action_input: str

    def __post_init__(self):
        if not self.action:
            raise ValidationError("AgentStep.action must be non-empty")


@dataclass(frozen=True)
class AgentFinal:
    """A parsed final answer for the user."""

    thought: str
    response: str

    def __post_init__(self):
        if not self.response:
            raise ValidationError("AgentFinal.response must be non-empty")


@dataclass(frozen=True)
class Observation:
    """Text rendering of a tool result, fed back into the loop."""

    text: str


@dataclass(frozen=True)
class PromptTemplate:
    system_prefix: str
    system_format: str
    system_suffix: str

    def __post_init__(self):
        combined = self.system_prefix + self.system_format + self.system_suffix
        found = set(re.findall(r"\{([a-z_]+)\}", combined))
        unknown = found - set(PLACEHOLDERS)
        if unknown:
            raise AssemblyError(f"template contains unknown placeholders: {sorted(unknown)}")
        missing = {"tool_names", "ai_prefix", "chat_history", "input", "agent_scratchpad"} - found
        if missing:
            raise AssemblyError(f"template missing placeholders: {sorted(missing)}")


def load_default_template() -> PromptTemplate:
    pkg = resources.files(__package__) / "data"
    return PromptTemplate(
        system_prefix=(pkg / "system_prefix.txt").read_text(encoding="utf-8"),
        system_format=(pkg / "system_format.txt").read_text(encoding="utf-8"),
        system_suffix=(pkg / "system_suffix.txt").read_text(encoding="utf-8"),
    )


def render_history(turns: list[tuple[str, str]], limit: int = HISTORY_LIMIT_DEFAULT) -> str:
    """Alternating Human/AI lines, newest last, truncated to ``limit`` turns."""
    lines = []
    for query, answer in turns[-limit:]:
        lines.append(f"Human: {query}")
        lines.append(f"{AI_PREFIX}: {answer}")
    return "\n".join(lines)


def render_scratchpad(entries: list[tuple[AgentStep, Observation]]) -> str:
    """Prior steps as Action/Action Input/Observation blocks.

    The rendering continues the suffix's trailing "Thought: Do I need to use
    a tool? " line, so each entry starts with the yes-answer and ends by
    reopening the question for the next completion.
    """
    parts = []
    for step, obs in entries:
        first = "Yes" if not step.thought else f"Yes {step.thought}"
        parts.append(
            f"{first}\n"
            f"{ACTION_MARKER} {step.action}\n"
            f"{ACTION_INPUT_MARKER} {step.action_input}\n"
            f"{OBSERVATION_MARKER} {obs.text}\n"
            f"{THOUGHT_MARKER} {TOOL_QUESTION} "
        )
    return "".join(parts)


def assemble_prompt(
    template: PromptTemplate,
    tools: list,
    history: list[tuple[str, str]],
    input_text: str,
    scratchpad: list[tuple[AgentStep, Observation]],
    history_limit: int = HISTORY_LIMIT_DEFAULT,
) -> str:
    """Substitute every placeholder; deterministic in all inputs.

    ``tools`` is any sequence of objects with ``name`` and ``description``.
    """
    if not tools:
        raise AssemblyError("cannot assemble a prompt with no registered tools")
    tool_block = "\n".join(f"{t.name}: {t.description}" for t in tools)
    substitutions = {
        "tool_names": ", ".join(t.name for t in tools),
        "ai_prefix": AI_PREFIX,
        "chat_history": render_history(history, history_limit),
        "input": input_text,
        "agent_scratchpad": render_scratchpad(scratchpad),
    }
    text = "\n".join(
        [template.system_prefix, tool_block, "", template.system_format, template.system_suffix]
    )
    for name, value in substitutions.items():
        text = text.replace("{" + name + "}", value)
    return text


def _marker_content(line: str, marker: str) -> str | None:
    if line.startswith(marker):
        return line[len(marker) :].strip()
    return None


def parse_llm_output(text: str) -> AgentStep | AgentFinal:
    """Classify model output as a tool step or a final answer.

    A yes-thought followed by an Action line yields an AgentStep whose
    Action Input spans to the end of the text (or a stray Observation
    marker). A no-thought followed by the AI prefix yields an AgentFinal.
    Anything else raises ProtocolParseError carrying the raw text.
    """
    lines = text.split("\n")
    uses_tool: bool | None = None
    thought = ""
    cursor = 0
    for i, line in enumerate(lines):
        content = _marker_content(line, THOUGHT_MARKER)
        if content is not None and content.startswith(TOOL_QUESTION):
            answer = content[len(TOOL_QUESTION) :].strip()
            if answer.startswith("Yes"):
                uses_tool = True
                thought = answer[3:].strip()
            elif answer.startswith("No"):
                uses_tool = False
                thought = answer[2:].strip()
            else:
                continue
            cursor = i + 1
            break

    if uses_tool is None:
        raise ProtocolParseError("no tool-use thought found", raw=text)

    if uses_tool:
        action = None
        for i in range(cursor, len(lines)):
            content = _marker_content(lines[i], ACTION_MARKER)
            # "Action Input:" also startswith "Action" but not "Action:"
            if content is not None:
                action = content
                cursor = i + 1
                break
        if not action:
            raise ProtocolParseError("yes-thought without an Action line", raw=text)
        action_input = ""
        for i in range(cursor, len(lines)):
            content = _marker_content(lines[i], ACTION_INPUT_MARKER)
            if content is not None:
                collected = [content]
                for rest in lines[i + 1 :]:
                    if rest.startswith(OBSERVATION_MARKER):
                        break
                    collected.append(rest)
                action_input = "\n".join(collected).strip()
                break
        return AgentStep(thought=thought, action=action, action_input=action_input)

    for i in range(cursor, len(lines)):
        content = _marker_content(lines[i], AI_PREFIX + ":")
        if content is not None:
            response = "\n".join([content] + lines[i + 1 :]).strip()
            if not response:
                raise ProtocolParseError("empty final response", raw=text)
            return AgentFinal(thought=thought, response=response)
    raise ProtocolParseError("no-thought without an AI response line", raw=text)


def render_step(step: AgentStep) -> str:
    """Canonical text form of a tool step (what a well-behaved model emits)."""
    first = f"{THOUGHT_MARKER} {TOOL_QUESTION} Yes"
    if step.thought:
        first += f" {step.thought}"
    return f"{first}\n{ACTION_MARKER} {step.action}\n{ACTION_INPUT_MARKER} {step.action_input}"


def render_final(final: AgentFinal) -> str:
    first = f"{THOUGHT_MARKER} {TOOL_QUESTION} No"
    if final.thought:
        first += f" {final.thought}"
    return f"{first}\n{AI_PREFIX}: {final.response}"


def split_args(raw: str, arity: int) -> list[str]:
    """Split a tool argument string on its first ``arity - 1`` commas.

    Trailing parts keep their embedded commas, so free-text descriptions
    survive intact. Each part is whitespace-trimmed.
    """
    if arity < 1:
        raise ValidationError(f"arity must be >= 1, got {arity}")
    parts = raw.split(",", arity - 1)
    if len(parts) < arity:
        raise ArityError(expected=arity, found=len(parts))
    return [p.strip() for p in parts]
