"""Service launcher."""

from __future__ import annotations

import click
import uvicorn

from .app import create_app
from .encoders import make_encoder


@click.command()
@click.option("--model", default="dev-hash-64", show_default=True,
              help="Checkpoint id, or dev-hash-<dim> for the weight-free encoder.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8901, show_default=True, type=int)
@click.option("--device", default="cpu", show_default=True, help="Inference device for checkpoints.")
def main(model: str, host: str, port: int, device: str) -> None:
    """Serve image/text embeddings for one model over HTTP."""
    app = create_app(make_encoder(model, device=device), load_async=True)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
