"""Tool registry and dispatch: argument splitting, asset resolution, invocation.

Tool names and descriptions load from a data file and are matched exactly;
every failure a model could plausibly recover from comes back as an error
observation rather than an exception, so the dialogue loop can continue.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from ..audio import AssetStore, AudioAsset
from ..config import EngineConfig
from ..errors import (
    ArityError,
    BackendError,
    NonexistentFileError,
    TransportError,
    ValidationError,
)
from ..gat import GlobalAttributeTable
from ..protocol import split_args

PARAM_KINDS = ("asset_path", "free_text", "stem_name", "mode", "seconds", "semitones", "ratio")


@dataclass(frozen=True)
class ToolSpec:
    key: str
    name: str
    description: str
    arity: int
    param_kinds: tuple[str, ...]

    def __post_init__(self):
        if self.arity != len(self.param_kinds):
            raise ValidationError(f"tool {self.key}: arity {self.arity} != param kinds")
        unknown = set(self.param_kinds) - set(PARAM_KINDS)
        if unknown:
            raise ValidationError(f"tool {self.key}: unknown param kinds {sorted(unknown)}")

    @property
    def input_format(self) -> str:
        marker = "The input to this tool should be"
        idx = self.description.find(marker)
        return self.description[idx:] if idx >= 0 else f"{self.arity} comma separated parts"


@dataclass
class ToolResult:
    observation_text: str
    produced_asset: AudioAsset | None = None
    gat_updates: dict = field(default_factory=dict)
    error: bool = False

    def __post_init__(self):
        if self.produced_asset is not None and self.produced_asset.relative_path not in self.observation_text:
            raise ValidationError(
                f"observation must mention produced asset {self.produced_asset.relative_path}"
            )


@dataclass
class ToolContext:
    """Everything a tool invocation may touch; per-step, owned by the handler."""

    store: AssetStore
    backends: dict
    llm: object
    config: EngineConfig
    gat: GlobalAttributeTable

    def resolve(self, path: str) -> AudioAsset:
        return self.store.resolve(path)


class Registry:
    def __init__(self, specs: list[ToolSpec], impls: dict[str, Callable]):
        names = [s.name for s in specs]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate tool names in registry")
        missing = {s.key for s in specs} - set(impls)
        if missing:
            raise ValidationError(f"tools without implementations: {sorted(missing)}")
        self.specs = list(specs)
        self.by_name = {s.name: s for s in specs}
        self.impls = impls

    def __len__(self) -> int:
        return len(self.specs)


def load_toolspecs() -> list[ToolSpec]:
    raw = (resources.files(__package__) / "data" / "toolspecs.json").read_text("utf-8")
    return [
        ToolSpec(
            key=entry["key"],
            name=entry["name"],
            description=entry["description"],
            arity=entry["arity"],
            param_kinds=tuple(entry["param_kinds"]),
        )
        for entry in json.loads(raw)
    ]


def load_registry() -> Registry:
    from .impl import IMPLEMENTATIONS

    return Registry(load_toolspecs(), IMPLEMENTATIONS)


def _error(text: str) -> ToolResult:
    return ToolResult(observation_text=f"Error: {text}", error=True)


def dispatch(registry: Registry, action: str, action_input: str, ctx: ToolContext) -> ToolResult:
    """Split args per the tool's arity, resolve assets, run the implementation."""
    spec = registry.by_name.get(action)
    if spec is None:
        return _error(f"unknown tool: {action}")

    try:
        parts = split_args(action_input, spec.arity)
    except ArityError as exc:
        return _error(f"{exc}. {spec.input_format}")

    args: list = []
    for kind, part in zip(spec.param_kinds, parts):
        if kind == "asset_path":
            try:
                args.append(ctx.resolve(part))
            except NonexistentFileError as exc:
                return _error(f"{exc}; use an existing music file from a previous result")
        elif kind == "seconds" or kind == "ratio":
            try:
                args.append(float(part))
            except ValueError:
                return _error(f"expected a number for {kind}, got {part!r}")
        elif kind == "semitones":
            try:
                args.append(int(part))
            except ValueError:
                return _error(f"expected an integer semitone value, got {part!r}")
        else:
            args.append(part)

    impl = registry.impls[spec.key]
    try:
        return impl(ctx, *args)
    except (ValidationError, BackendError, NonexistentFileError, TransportError) as exc:
        return _error(str(exc))
