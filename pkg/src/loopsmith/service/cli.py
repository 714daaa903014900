"""Command line entry points: serve, chat, replay."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from ..config import load_config, with_mock_stack
from ..engine import Engine
from ..errors import LoopsmithError, TurnError
from .transcript import run_transcript


def _build_engine(config_path, seed, mock, asset_root) -> Engine:
    config = load_config(config_path, seed=seed, asset_root=asset_root)
    if mock:
        config = with_mock_stack(config)
    return Engine(config)


@click.group()
def main():
    """Conversational music-loop workshop."""


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None, help="Seed for mock backends and asset ids.")
@click.option("--mock", is_flag=True, help="Force the deterministic mock stack.")
@click.option("--asset-root", type=click.Path(), default=None)
@click.option("--ui-dir", type=click.Path(exists=True), default=None, help="Built web UI to serve at /.")
def serve(host, port, config_path, seed, mock, asset_root, ui_dir):
    """Start the session service."""
    import uvicorn

    from .app import create_app

    engine = _build_engine(config_path, seed, mock, asset_root)
    app = create_app(engine, ui_dir=ui_dir)
    click.echo(f"asset root: {engine.store.root.resolve()}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--mock", is_flag=True)
@click.option("--asset-root", type=click.Path(), default=None)
def chat(config_path, seed, mock, asset_root):
    """Interactive REPL against a local engine.

    Type a request per line; /attach <file.wav> stages audio for the next
    message; /state prints the attribute table; /quit exits.
    """
    from ..audio import decode_wav

    engine = _build_engine(config_path, seed, mock, asset_root)
    session = engine.new_session()
    pending_attachment = None
    click.echo("loopsmith chat (Ctrl-D or /quit to exit)")
    while True:
        try:
            line = input("you> ").strip()
        except EOFError:
            click.echo("")
            break
        if not line:
            continue
        if line in ("/quit", "/exit"):
            break
        if line == "/state":
            click.echo(str(session.gat.to_dict()))
            continue
        if line.startswith("/attach "):
            path = Path(line[len("/attach ") :].strip())
            try:
                pending_attachment = engine.store.store(decode_wav(path.read_bytes()))
            except (OSError, LoopsmithError) as exc:
                click.echo(f"cannot attach: {exc}")
                continue
            click.echo(f"attached {pending_attachment.relative_path}")
            continue
        try:
            turn = engine.handle(session, line, pending_attachment)
        except TurnError as exc:
            click.echo(f"turn failed: {exc}")
            pending_attachment = None
            continue
        pending_attachment = None
        for step, obs in turn.steps:
            click.echo(f"  [{step.action}] -> {obs.text}")
        click.echo(f"bot> {turn.answer}")


@main.command()
@click.argument("transcript", type=click.Path(exists=True))
@click.option("--out", "out_dir", type=click.Path(), default="replay-out", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--mock", is_flag=True)
@click.option("--asset-root", type=click.Path(), default=None)
def replay(transcript, out_dir, config_path, seed, mock, asset_root):
    """Replay a scripted transcript and write a report; nonzero exit on failure."""
    engine = _build_engine(config_path, seed, mock, asset_root)
    try:
        status = run_transcript(engine, transcript, out_dir)
    except LoopsmithError as exc:
        click.echo(f"replay aborted: {exc}", err=True)
        sys.exit(2)
    click.echo(f"report written to {Path(out_dir) / 'report.json'}")
    sys.exit(status)


if __name__ == "__main__":
    main()
