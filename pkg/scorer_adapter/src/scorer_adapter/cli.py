"""CLI: ``score`` converts a pairs file to a scores file, ``serve`` runs
the scorer as an HTTP service speaking the remote-scorer protocol."""

from __future__ import annotations

import sys

import click

from . import __version__
from .files import score_pairs_file
from .model_runner import DEFAULT_MODEL, AdapterConfig, ModelLoadError


def _model_options(fn):
    fn = click.option("--model", default=DEFAULT_MODEL, show_default=True)(fn)
    fn = click.option("--batch-size", default=16, show_default=True)(fn)
    fn = click.option("--device", default="cpu", show_default=True)(fn)
    fn = click.option("--max-length", default=512, show_default=True)(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
def main():
    """Cross-encoder NLI scoring for (evidence, condition) pairs."""


@main.command()
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@_model_options
def score(pairs_path, out_path, model, batch_size, device, max_length):
    """Score a pairs file into the canonical scores file."""
    config = AdapterConfig(
        model=model,
        batch_size=batch_size,
        device=device,
        max_length=max_length,
        pairs_path=pairs_path,
        out_path=out_path,
    )
    try:
        count = score_pairs_file(config)
    except (ModelLoadError, ValueError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"scored {count} pairs into {out_path}")


@main.command()
@click.option("--port", default=8752, show_default=True)
@click.option("--host", default="0.0.0.0", show_default=True)
@_model_options
def serve(port, host, model, batch_size, device, max_length):
    """Serve the remote-scorer protocol until interrupted."""
    from .server import serve as run_server

    config = AdapterConfig(
        model=model,
        batch_size=batch_size,
        device=device,
        max_length=max_length,
        serve=True,
        port=port,
    )
    click.echo(f"serving {model} on {host}:{port}")
    try:
        run_server(config, host=host)
    except ModelLoadError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except KeyboardInterrupt:
        pass


if __name__ == "__main__":
    main()
