from .grammar import (
    AI_PREFIX,
    FORMAT_CORRECTION,
    AgentFinal,
    AgentStep,
    Observation,
    PromptTemplate,
    assemble_prompt,
    load_default_template,
    parse_llm_output,
    render_final,
    render_history,
    render_scratchpad,
    render_step,
    split_args,
)

__all__ = [
    "AI_PREFIX",
    "FORMAT_CORRECTION",
    "AgentFinal",
    "AgentStep",
    "Observation",
    "PromptTemplate",
    "assemble_prompt",
    "load_default_template",
    "parse_llm_output",
    "render_final",
    "render_history",
    "render_scratchpad",
    "render_step",
    "split_args",
]
