"""The accept/retry similarity gate guarding continuation-based generation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..audio import AudioBuffer


@dataclass
class GateResult:
    accepted: bool
    attempts: int
    best_score: float
    scores: list[float]
    candidate: AudioBuffer | None


def similarity_gate(
    make_candidate: Callable[[int], AudioBuffer],
    score: Callable[[AudioBuffer], float],
    threshold: float,
    max_retries: int,
) -> GateResult:
    """Generate candidates until one scores at or above ``threshold``.

    ``make_candidate`` receives the attempt index (1-based) so backends can
    vary their sampling; at most ``max_retries`` candidates are generated.
    """
    best = float("-inf")
    scores: list[float] = []
    for attempt in range(1, max_retries + 1):
        candidate = make_candidate(attempt)
        value = float(score(candidate))
        scores.append(value)
        best = max(best, value)
        if value >= threshold:
            return GateResult(True, attempt, best, scores, candidate)
    return GateResult(False, max_retries, best, scores, None)
