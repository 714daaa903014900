"""Deterministic rule-based planner used as the test double for the model.

The planner is stateless: everything it needs (user input, prior
observations, known asset paths) is re-derived from the prompt on every
call, so multi-step chains are exact functions of the conversation. Rules
live in a JSON script; see docs/planner-scripts.md for the grammar.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import ConfigError, ValidationError
from ..protocol import AgentFinal, AgentStep, render_final, render_step
from .base import LanguageModelClient

ASSET_PATH_RE = re.compile(r"music/[0-9a-f]{8}\.wav")
_QUOTED_RE = re.compile(r"[\"“”']([^\"“”']+)[\"“”']")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_SIGNED_INT_RE = re.compile(r"[+-]?\d+")

_STEM_WORDS = {
    "vocals": "vocals",
    "vocal": "vocals",
    "voice": "vocals",
    "drums": "drums",
    "drum": "drums",
    "bass": "bass",
    "guitar": "guitar",
    "piano": "piano",
    "other": "other",
}

_GENERIC_FAILURE = "I could not complete that request."


@dataclass(frozen=True)
class PlannerRule:
    name: str
    pattern: re.Pattern
    plan: tuple[tuple[str, str], ...]  # (tool name, argument template)
    final: str
    final_no_asset: str = _GENERIC_FAILURE
    final_error: str | None = None


@dataclass(frozen=True)
class PlannerScript:
    rules: tuple[PlannerRule, ...]
    impressions: dict[str, str] = field(default_factory=dict)
    impression_fallback: str = "melodic popular song"
    no_match_final: str = "I cannot help with that."


def load_planner_script(path: str | Path | None = None) -> PlannerScript:
    """Load a script file, or the packaged default when ``path`` is None."""
    if path is None:
        raw = (resources.files(__package__) / "data" / "default_planner.json").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"planner script is not valid JSON: {exc}") from exc
    rules = []
    for entry in data.get("rules", []):
        try:
            rules.append(
                PlannerRule(
                    name=entry["name"],
                    pattern=re.compile(entry["pattern"]),
                    plan=tuple((s["tool"], s["input"]) for s in entry.get("plan", [])),
                    final=entry["final"],
                    final_no_asset=entry.get("final_no_asset", _GENERIC_FAILURE),
                    final_error=entry.get("final_error"),
                )
            )
        except (KeyError, re.error) as exc:
            raise ConfigError(f"bad planner rule {entry.get('name', '?')!r}: {exc}") from exc
    return PlannerScript(
        rules=tuple(rules),
        impressions=data.get("impressions", {}),
        impression_fallback=data.get("impression_fallback", "melodic popular song"),
        no_match_final=data.get("no_match_final", "I cannot help with that."),
    )


class _Unresolved(Exception):
    def __init__(self, var: str):
        super().__init__(var)
        self.var = var


@dataclass
class _PromptView:
    """Facts the planner extracts from an assembled prompt."""

    input_text: str
    observations: list[str]
    trusted_assets: list[str]  # paths from AI history lines + non-error observations
    input_assets: list[str]  # paths the user typed themselves


def _parse_prompt(prompt: str) -> _PromptView:
    # Everything before "New input:" is principles + history; the scratchpad
    # with this turn's observations comes after it. Scanning the whole prompt
    # would pick up the format block's placeholder Observation line.
    marker = "\nNew input: "
    start = prompt.rfind(marker)
    head, tail = (prompt[:start], prompt[start + len(marker) :]) if start >= 0 else ("", prompt)
    end = tail.find("\nThought:")
    input_text = (tail if end < 0 else tail[:end]).strip()

    trusted: list[str] = []
    for line in head.split("\n"):
        if line.startswith("AI: "):
            trusted.extend(ASSET_PATH_RE.findall(line))

    observations = []
    for line in tail.split("\n"):
        if line.startswith("Observation: "):
            text = line[len("Observation: ") :].strip()
            observations.append(text)
            if not text.startswith("Error"):
                trusted.extend(ASSET_PATH_RE.findall(text))
    return _PromptView(
        input_text=input_text,
        observations=observations,
        trusted_assets=trusted,
        input_assets=ASSET_PATH_RE.findall(input_text),
    )


def _factor_from_text(text: str) -> str:
    m = _NUMBER_RE.search(text)
    if m:
        return m.group(0)
    low = text.lower()
    if "quick" in low or "fast" in low:
        return "1.25"
    if "slow" in low:
        return "0.8"
    raise _Unresolved("$FACTOR")


def _resolve(template: str, view: _PromptView) -> str:
    """Substitute $VARS; raises _Unresolved when a binding is missing."""
    text = view.input_text
    out = template
    if "$LAST_OBSERVATION" in out:
        clean = [o for o in view.observations if not o.startswith("Error")]
        if not clean:
            raise _Unresolved("$LAST_OBSERVATION")
        out = out.replace("$LAST_OBSERVATION", clean[-1])
    if "$INPUT_ASSET" in out:
        candidates = view.input_assets or view.trusted_assets
        if not candidates:
            raise _Unresolved("$INPUT_ASSET")
        out = out.replace("$INPUT_ASSET", candidates[-1])
    if "$LAST_ASSET" in out:
        if not view.trusted_assets:
            raise _Unresolved("$LAST_ASSET")
        out = out.replace("$LAST_ASSET", view.trusted_assets[-1])
    if "$TITLE" in out:
        m = _QUOTED_RE.search(text)
        out = out.replace("$TITLE", m.group(1).strip() if m else text)
    if "$STEM" in out:
        stem = next((v for w, v in _STEM_WORDS.items() if re.search(rf"\b{w}s?\b", text.lower())), None)
        if stem is None:
            raise _Unresolved("$STEM")
        out = out.replace("$STEM", stem)
    if "$MODE" in out:
        mode = "extract" if re.search(r"\b(extract|separate|isolate)\b", text.lower()) else "remove"
        out = out.replace("$MODE", mode)
    if "$START" in out or "$END" in out:
        numbers = _NUMBER_RE.findall(text)
        if len(numbers) < 2:
            raise _Unresolved("$START/$END")
        out = out.replace("$START", numbers[0]).replace("$END", numbers[1])
    if "$SEMITONES" in out:
        m = _SIGNED_INT_RE.search(text)
        if not m:
            raise _Unresolved("$SEMITONES")
        out = out.replace("$SEMITONES", m.group(0))
    if "$FACTOR" in out:
        out = out.replace("$FACTOR", _factor_from_text(text))
    if "$INPUT" in out:
        out = out.replace("$INPUT", text)
    return out


class ScriptedPlanner(LanguageModelClient):
    """Emits canonical protocol text from pattern-matched plans.

    The number of prior observations in the prompt tells the planner how
    far through the matched rule's plan it is; once the plan is exhausted
    it emits the rule's final-response template.
    """

    retries = 0

    def __init__(self, script: PlannerScript, call_log: list | None = None):
        self.script = script
        self._log = call_log

    def _record(self, op: str, detail: str) -> None:
        if self._log is not None:
            self._log.append((f"llm.{op}", detail))

    def _complete_once(self, prompt: str) -> str:
        view = _parse_prompt(prompt)
        self._record("complete", view.input_text)
        rule = next((r for r in self.script.rules if r.pattern.search(view.input_text)), None)
        if rule is None:
            return render_final(AgentFinal(thought="", response=self.script.no_match_final))

        done = len(view.observations)
        if done < len(rule.plan):
            tool, arg_template = rule.plan[done]
            try:
                action_input = _resolve(arg_template, view)
            except _Unresolved:
                return render_final(AgentFinal(thought="", response=rule.final_no_asset))
            return render_step(AgentStep(thought="", action=tool, action_input=action_input))

        if view.observations and view.observations[-1].startswith("Error"):
            response = rule.final_error or rule.final_no_asset
            return render_final(AgentFinal(thought="", response=response))
        try:
            response = _resolve(rule.final, view)
        except _Unresolved:
            response = rule.final_no_asset
        return render_final(AgentFinal(thought="", response=response))

    def translate_impression(self, title: str) -> str:
        title = title.strip()
        if not title:
            raise ValidationError("impression title must be non-empty")
        self._record("translate", title)
        if title in self.script.impressions:
            return self.script.impressions[title].strip()
        return self.script.impression_fallback
