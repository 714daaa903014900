from .base import LanguageModelClient
from .remote import RemoteChatClient
from .scripted import PlannerScript, ScriptedPlanner, load_planner_script

__all__ = [
    "LanguageModelClient",
    "PlannerScript",
    "RemoteChatClient",
    "ScriptedPlanner",
    "load_planner_script",
]
