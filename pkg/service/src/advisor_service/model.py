"""Compact transformer encoder-decoder over whitespace tokens.

Sized for desk-scale corpora and CPU inference; the architecture knobs are
configuration, and the serve/train contract does not depend on them.
"""

import json
import os
from dataclasses import asdict, dataclass

import torch
from torch import nn

from .data import END, GAP, SEP, START
from .vocab import Vocab

STRUCTURAL = (START, SEP, END, GAP)


@dataclass
class ModelConfig:
    vocab_size: int
    d_model: int = 128
    nhead: int = 4
    num_layers: int = 2
    ffn_dim: int = 256
    dropout: float = 0.1
    max_len: int = 1024
    max_target_len: int = 16


class EventSeq2Seq(nn.Module):
    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg
        self.token_embed = nn.Embedding(cfg.vocab_size, cfg.d_model)
        self.pos_embed = nn.Embedding(cfg.max_len, cfg.d_model)
        self.transformer = nn.Transformer(
            d_model=cfg.d_model,
            nhead=cfg.nhead,
            num_encoder_layers=cfg.num_layers,
            num_decoder_layers=cfg.num_layers,
            dim_feedforward=cfg.ffn_dim,
            dropout=cfg.dropout,
            batch_first=True,
        )
        self.out = nn.Linear(cfg.d_model, cfg.vocab_size)

    def _embed(self, ids):
        positions = torch.arange(ids.size(1), device=ids.device).unsqueeze(0)
        return self.token_embed(ids) + self.pos_embed(positions)

    def forward(self, src_ids, src_pad_mask, tgt_ids, tgt_pad_mask):
        causal = nn.Transformer.generate_square_subsequent_mask(
            tgt_ids.size(1), device=tgt_ids.device
        )
        hidden = self.transformer(
            self._embed(src_ids),
            self._embed(tgt_ids),
            tgt_mask=causal,
            src_key_padding_mask=src_pad_mask,
            tgt_key_padding_mask=tgt_pad_mask,
            memory_key_padding_mask=src_pad_mask,
        )
        return self.out(hidden)


def _banned_ids(vocab):
    banned = {vocab.pad_id, vocab.bos_id, vocab.stoi["<unk>"]}
    for tok in STRUCTURAL:
        if tok in vocab.stoi:
            banned.add(vocab.stoi[tok])
    return banned


@torch.no_grad()
def generate(model, vocab, source_ids, beam_size=1, sample=False, generator=None):
    """Decode one event text from source token ids.

    Greedy by default; sample=True draws from the softmax; beam_size > 1
    runs a small beam search. Structural and special tokens are never
    emitted, and the end token is blocked at the first step so the result
    is always nonempty.
    """
    model.eval()
    device = next(model.parameters()).device
    src = torch.tensor([source_ids], dtype=torch.long, device=device)
    banned = _banned_ids(vocab)
    max_len = model.cfg.max_target_len

    def step_logits(tgt_ids_list):
        tgt = torch.tensor([tgt_ids_list], dtype=torch.long, device=device)
        # single unpadded sequence: skip the padding masks entirely
        logits = model(src, None, tgt, None)[0, -1]
        logits[list(banned)] = float("-inf")
        if len(tgt_ids_list) == 1:
            logits[vocab.eos_id] = float("-inf")
        return logits

    if beam_size > 1:
        return _beam(step_logits, vocab, beam_size, max_len)

    ids = [vocab.bos_id]
    out = []
    for _ in range(max_len):
        logits = step_logits(ids)
        if sample:
            probs = torch.softmax(logits, dim=-1)
            next_id = int(torch.multinomial(probs, 1, generator=generator))
        else:
            next_id = int(torch.argmax(logits))
        if next_id == vocab.eos_id:
            break
        out.append(next_id)
        ids.append(next_id)
    return vocab.decode(out)


def _beam(step_logits, vocab, beam_size, max_len):
    beams = [(0.0, [vocab.bos_id], False)]
    for _ in range(max_len):
        if all(done for _, _, done in beams):
            break
        grown = []
        for score, ids, done in beams:
            if done:
                grown.append((score, ids, done))
                continue
            log_probs = torch.log_softmax(step_logits(ids), dim=-1)
            top = torch.topk(log_probs, beam_size)
            for logp, tok in zip(top.values.tolist(), top.indices.tolist()):
                grown.append((score + logp, ids + [tok], tok == vocab.eos_id))
        grown.sort(key=lambda b: b[0] / max(len(b[1]) - 1, 1), reverse=True)
        beams = grown[:beam_size]
    best = max(beams, key=lambda b: b[0] / max(len(b[1]) - 1, 1))
    ids = [i for i in best[1][1:] if i != vocab.eos_id]
    return vocab.decode(ids)


def save_artifact(model, vocab, path, meta=None):
    """Write a loadable model directory: config.json + weights.pt."""
    os.makedirs(path, exist_ok=True)
    config = {"model": asdict(model.cfg), "vocab": vocab.to_list(), "meta": meta or {}}
    with open(os.path.join(path, "config.json"), "w", encoding="utf-8") as f:
        json.dump(config, f, indent=2, sort_keys=True)
    torch.save(model.state_dict(), os.path.join(path, "weights.pt"))


def load_artifact(path):
    """(model in eval mode, vocab, meta) from a save_artifact directory."""
    with open(os.path.join(path, "config.json"), encoding="utf-8") as f:
        config = json.load(f)
    vocab = Vocab.from_list(config["vocab"])
    model = EventSeq2Seq(ModelConfig(**config["model"]))
    state = torch.load(os.path.join(path, "weights.pt"), map_location="cpu", weights_only=True)
    model.load_state_dict(state)
    model.eval()
    return model, vocab, config.get("meta", {})
