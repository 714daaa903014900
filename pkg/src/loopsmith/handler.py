"""Per-turn orchestration: preprocess, reason/act loop, execute, respond.

One call to :func:`handle_query` runs a whole dialogue round. Session state
is only committed once the turn fully succeeds, so a failed turn leaves
history and the attribute table exactly as they were.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .audio import AssetStore, AudioAsset
from .config import EngineConfig
from .errors import ProtocolParseError, TransportError, TurnError
from .gat import GatHistory, GlobalAttributeTable, apply_updates
from .protocol import (
    FORMAT_CORRECTION,
    AgentFinal,
    AgentStep,
    Observation,
    assemble_prompt,
    parse_llm_output,
)
from .tools import ToolContext, dispatch

MAX_PARSE_RETRIES = 2


@dataclass
class DialogueTurn:
    """One completed (query, answer) round with its full tool trace."""

    query: str
    answer: str
    attached_asset: AudioAsset | None = None
    produced_assets: list[AudioAsset] = field(default_factory=list)
    steps: list[tuple[AgentStep, Observation]] = field(default_factory=list)


class DialogueHistory:
    """Append-only turn list for one session."""

    def __init__(self):
        self._turns: list[DialogueTurn] = []

    def append(self, turn: DialogueTurn) -> None:
        self._turns.append(turn)

    @property
    def turns(self) -> list[DialogueTurn]:
        return list(self._turns)

    def as_pairs(self) -> list[tuple[str, str]]:
        return [(t.query, t.answer) for t in self._turns]

    def __len__(self) -> int:
        return len(self._turns)


@dataclass
class ChainState:
    """Threads each tool's output asset into the next tool in the turn."""

    current_asset: AudioAsset | None = None
    step_index: int = 0

    def advance(self, asset: AudioAsset) -> None:
        self.current_asset = asset
        self.step_index += 1


class Session:
    """Session state plus the lock enforcing one in-flight turn at a time."""

    def __init__(self, session_id: str, config: EngineConfig):
        self.id = session_id
        self.config = config
        self.history = DialogueHistory()
        self.gat = GlobalAttributeTable()
        self.gat_history = GatHistory()
        self.lock = threading.Lock()


def resolve_asset_reference(store: AssetStore, raw: str) -> AudioAsset:
    """Exact lookup of a candidate path; raises NonexistentFileError otherwise."""
    return store.resolve(raw)


def _sanitize(text: str) -> str:
    return " ".join(text.split())


def handle_query(engine, session: Session, query: str, attached: AudioAsset | None = None) -> DialogueTurn:
    """Run one dialogue round; commits session state only on success.

    Raises TurnError when the turn cannot produce an answer (iteration cap,
    repeated unparseable output, or language-model transport failure).
    """
    if not query or not query.strip():
        raise TurnError("query must be non-empty")
    query = _sanitize(query)
    config: EngineConfig = session.config

    # phase 1: unify input modality; attached audio becomes a described file
    model_input = query
    if attached is not None:
        caption = engine.backends["caption"].caption_audio(engine.store.load(attached))
        model_input = f"Human provided music {attached.relative_path} described as: {caption}\n{query}"

    working_gat = session.gat
    chain = ChainState(current_asset=attached or working_gat.mix)
    scratchpad: list[tuple[AgentStep, Observation]] = []
    produced: list[AudioAsset] = []
    history_pairs = session.history.as_pairs()

    answer: str | None = None
    parse_failures = 0
    corrective = False
    for _ in range(config.max_iterations):
        prompt = assemble_prompt(
            engine.template,
            engine.registry.specs,
            history_pairs,
            model_input,
            scratchpad,
            history_limit=config.history_limit,
        )
        if corrective:
            prompt = f"{prompt}\n{FORMAT_CORRECTION}"
        try:
            completion = engine.llm.complete(prompt)
        except TransportError as exc:
            raise TurnError(f"language model unavailable: {exc}") from exc

        try:
            parsed = parse_llm_output(completion)
        except ProtocolParseError as exc:
            parse_failures += 1
            if parse_failures > MAX_PARSE_RETRIES:
                raise TurnError(f"model output unparseable after retries: {exc}") from exc
            corrective = True
            continue
        corrective = False

        if isinstance(parsed, AgentFinal):
            answer = parsed.response
            break

        # phase 3: execute, threading intermediate assets through the chain
        ctx = ToolContext(
            store=engine.store,
            backends=engine.backends,
            llm=engine.llm,
            config=config,
            gat=working_gat,
        )
        result = dispatch(engine.registry, parsed.action, parsed.action_input, ctx)
        scratchpad.append((parsed, Observation(result.observation_text)))
        if result.gat_updates:
            working_gat = apply_updates(working_gat, result.gat_updates)
        if result.produced_asset is not None:
            produced.append(result.produced_asset)
            chain.advance(result.produced_asset)

    if answer is None:
        trace = ", ".join(step.action for step, _ in scratchpad) or "none"
        raise TurnError(
            f"no final answer within {config.max_iterations} iterations; executed steps: {trace}"
        )

    turn = DialogueTurn(
        query=query,
        answer=answer,
        attached_asset=attached,
        produced_assets=produced,
        steps=scratchpad,
    )
    session.history.append(turn)
    session.gat = working_gat
    session.gat_history.append(len(session.history), working_gat)
    return turn
