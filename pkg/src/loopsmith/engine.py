"""Wires configuration into a ready-to-run engine: store, backends, model, tools."""

from __future__ import annotations

import uuid

from .audio import AssetStore
from .backends import BackendConfig, MockBackend, RemoteBackend
from .config import CAPABILITIES, EngineConfig
from .errors import ConfigError
from .handler import Session, handle_query
from .llm import RemoteChatClient, ScriptedPlanner, load_planner_script
from .protocol import load_default_template
from .tools import load_registry


def build_backends(config: EngineConfig, call_log: list | None = None) -> dict:
    """One backend instance per capability, each configured independently."""
    backends = {}
    for capability in CAPABILITIES:
        endpoint = config.backend_endpoints.get(capability)
        if config.backend_kind == "remote" or endpoint:
            if not endpoint:
                raise ConfigError(f"remote backends need an endpoint for {capability!r}")
            backend_config = BackendConfig(
                kind="remote", endpoint=endpoint, timeout_s=config.backend_timeout_s
            )
            backends[capability] = RemoteBackend(backend_config, {capability})
        else:
            backends[capability] = MockBackend(
                seed=config.seed if config.seed is not None else 0,
                capabilities={capability},
                sample_rate=config.sample_rate,
                channels=config.channels,
                call_log=call_log,
            )
    return backends


def build_llm(config: EngineConfig, call_log: list | None = None):
    if config.llm_kind == "remote":
        return RemoteChatClient(
            endpoint=config.llm_endpoint,
            model=config.llm_model,
            api_key=config.llm_api_key,
            retries=config.llm_retries,
        )
    script = load_planner_script(config.planner_script)
    return ScriptedPlanner(script, call_log=call_log)


class Engine:
    """Everything a session needs, shared across sessions."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.store = AssetStore(config.asset_root, seed=config.seed)
        self.call_log: list = []
        self.backends = build_backends(config, self.call_log)
        self.llm = build_llm(config, self.call_log)
        self.template = load_default_template()
        self.registry = load_registry()

    def new_session(self, session_id: str | None = None) -> Session:
        return Session(session_id or uuid.uuid4().hex[:12], self.config)

    def handle(self, session: Session, query: str, attached=None):
        return handle_query(self, session, query, attached)
