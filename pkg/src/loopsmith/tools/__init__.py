from .gate import GateResult, similarity_gate
from .registry import Registry, ToolContext, ToolResult, ToolSpec, dispatch, load_registry, load_toolspecs

__all__ = [
    "GateResult",
    "Registry",
    "ToolContext",
    "ToolResult",
    "ToolSpec",
    "dispatch",
    "load_registry",
    "load_toolspecs",
    "similarity_gate",
]
