"""HTTP service: POST /advise -> {"event_text": ...}, GET /health.

The service is stateless across requests; it returns the raw generated
text and leaves graph-snapping to the planning client.
"""

from dataclasses import dataclass

import torch
from fastapi import FastAPI
from pydantic import BaseModel, Field

from .data import serialize_input
from .model import generate, load_artifact


class AdviseRequest(BaseModel):
    context: str
    history: list[str] = Field(default_factory=list)


@dataclass
class Engine:
    """Loaded model plus decoding settings."""

    model: object
    vocab: object
    max_input_len: int = 1024
    beam_size: int = 1
    sample: bool = False
    seed: int = 42

    @classmethod
    def load(cls, model_dir, max_input_len=None, beam_size=1, sample=False, seed=42):
        model, vocab, _ = load_artifact(model_dir)
        limit = max_input_len if max_input_len else model.cfg.max_len
        return cls(model, vocab, min(limit, model.cfg.max_len), beam_size, sample, seed)

    def suggest(self, context, history):
        source = serialize_input(context, history)
        ids = self.vocab.encode(source)[: self.max_input_len]
        generator = None
        if self.sample:
            generator = torch.Generator().manual_seed(self.seed)
        return generate(
            self.model, self.vocab, ids, beam_size=self.beam_size,
            sample=self.sample, generator=generator,
        )


def create_app(engine):
    app = FastAPI(title="storyplan advisor service")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/advise")
    def advise(request: AdviseRequest):
        return {"event_text": engine.suggest(request.context, request.history)}

    return app
