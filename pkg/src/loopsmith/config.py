"""Engine configuration with defaults < config file < environment precedence."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError

ENV_PREFIX = "LOOPSMITH_"

# Capabilities a backend can advertise; each gets its own backend instance.
CAPABILITIES = ("generate", "continue", "inpaint", "separate", "caption", "similarity")


@dataclass(frozen=True)
class EngineConfig:
    asset_root: str = "assets"
    sample_rate: int = 44100
    channels: int = 2
    loop_seconds: float = 8.0
    seed: int | None = 0
    similarity_threshold: float = 0.30
    max_retries: int = 4
    max_iterations: int = 10
    history_limit: int = 20
    llm_kind: str = "scripted"  # scripted | remote
    llm_endpoint: str | None = None
    llm_model: str | None = None
    llm_api_key: str | None = None
    llm_retries: int = 2
    planner_script: str | None = None  # path; None uses the packaged default
    backend_kind: str = "mock"  # mock | remote, default for all capabilities
    backend_endpoints: dict = field(default_factory=dict)  # capability -> host:port
    backend_timeout_s: float = 30.0
    max_sessions: int = 64
    session_idle_ttl_s: float = 3600.0
    ui_dir: str | None = None

    def __post_init__(self):
        if self.llm_kind not in ("scripted", "remote"):
            raise ConfigError(f"llm_kind must be scripted or remote, got {self.llm_kind!r}")
        if self.backend_kind not in ("mock", "remote"):
            raise ConfigError(f"backend_kind must be mock or remote, got {self.backend_kind!r}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if self.max_retries < 1:
            raise ConfigError("max_retries must be >= 1")
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ConfigError("similarity_threshold must be in [0, 1]")
        unknown = set(self.backend_endpoints) - set(CAPABILITIES)
        if unknown:
            raise ConfigError(f"unknown backend capabilities: {sorted(unknown)}")


_INT_KEYS = {"sample_rate", "channels", "seed", "max_retries", "max_iterations", "history_limit", "max_sessions", "llm_retries"}
_FLOAT_KEYS = {"loop_seconds", "similarity_threshold", "backend_timeout_s", "session_idle_ttl_s"}


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    return value


def _env_overrides(env) -> dict:
    known = {f.name for f in fields(EngineConfig)}
    out: dict = {}
    endpoints: dict = {}
    for raw_key, value in env.items():
        if not raw_key.startswith(ENV_PREFIX):
            continue
        key = raw_key[len(ENV_PREFIX) :].lower()
        if key.startswith("backend_endpoint_"):
            endpoints[key[len("backend_endpoint_") :]] = value
        elif key in known:
            out[key] = _coerce(key, value)
    if endpoints:
        out["backend_endpoints"] = endpoints
    return out


def load_config(path: str | Path | None = None, env=None, **overrides) -> EngineConfig:
    """Build a config from defaults, then a JSON file, then env, then kwargs."""
    data: dict = {}
    if path is not None:
        try:
            file_data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        known = {f.name for f in fields(EngineConfig)}
        unknown = set(file_data) - known
        if unknown:
            raise ConfigError(f"unknown config keys in {path}: {sorted(unknown)}")
        data.update(file_data)
    data.update(_env_overrides(env if env is not None else os.environ))
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return EngineConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def with_mock_stack(config: EngineConfig) -> EngineConfig:
    """Force the deterministic test stack regardless of other settings."""
    return replace(config, llm_kind="scripted", backend_kind="mock", backend_endpoints={})
