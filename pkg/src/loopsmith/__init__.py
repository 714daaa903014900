"""Conversational music-loop workshop.

A language model conducts an ensemble of audio tools through a
Thought/Action/Observation dialogue, while a blackboard table of musical
attributes keeps the loop coherent across editing rounds.
"""

from .config import EngineConfig, load_config, with_mock_stack
from .engine import Engine

__version__ = "0.1.0"

__all__ = ["Engine", "EngineConfig", "load_config", "with_mock_stack", "__version__"]
