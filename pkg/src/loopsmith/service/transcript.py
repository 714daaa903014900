"""Batch replay of scripted dialogues, the regression harness.

Transcript grammar (one JSON object per line; blank lines and ``#``
comments skipped):

    {"text": "Can you give me a smooth rock music loop?"}
    {"text": "Use this drum pattern.", "audio": "fixtures/drums.wav"}

``audio`` paths are relative to the transcript file and are validated
before any turn runs. The emitted report carries per-turn answers, asset
paths, step traces and attribute-table snapshots, and is byte-stable for a
fixed seed so runs can be diffed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..audio import AudioAsset, decode_wav
from ..engine import Engine
from ..errors import TranscriptError, TurnError


@dataclass(frozen=True)
class TranscriptMessage:
    text: str
    audio_path: Path | None = None


def load_transcript(path: str | Path) -> list[TranscriptMessage]:
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TranscriptError(f"cannot read transcript {path}: {exc}") from exc

    messages: list[TranscriptMessage] = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TranscriptError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
        if not isinstance(record, dict) or not record.get("text"):
            raise TranscriptError(f"{path}:{lineno}: each record needs a non-empty 'text'")
        audio = record.get("audio")
        audio_path = (path.parent / audio) if audio else None
        if audio_path is not None and not audio_path.is_file():
            raise TranscriptError(f"{path}:{lineno}: referenced audio {audio_path} does not exist")
        messages.append(TranscriptMessage(text=record["text"], audio_path=audio_path))
    if not messages:
        raise TranscriptError(f"{path}: transcript has no messages")
    return messages


def run_transcript(engine: Engine, path: str | Path, out_dir: str | Path) -> int:
    """Replay all messages in one session; returns a process exit status."""
    messages = load_transcript(path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    session = engine.new_session(session_id="replay")
    report: dict = {"transcript": Path(path).name, "turns": []}
    failures = 0
    for index, message in enumerate(messages, start=1):
        attached: AudioAsset | None = None
        if message.audio_path is not None:
            attached = engine.store.store(decode_wav(message.audio_path.read_bytes()))
        try:
            turn = engine.handle(session, message.text, attached)
        except TurnError as exc:
            failures += 1
            report["turns"].append({"index": index, "query": message.text, "error": str(exc)})
            continue
        report["turns"].append(
            {
                "index": index,
                "query": turn.query,
                "answer": turn.answer,
                "produced_assets": [a.relative_path for a in turn.produced_assets],
                "steps": [
                    {
                        "action": step.action,
                        "action_input": step.action_input,
                        "observation": obs.text,
                    }
                    for step, obs in turn.steps
                ],
                "gat": session.gat.to_dict(),
            }
        )
    report["failed_turns"] = failures

    report_path = out_dir / "report.json"
    report_path.write_text(
        json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return 0 if failures == 0 else 1
