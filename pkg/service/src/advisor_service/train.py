"""Fine-tune the generator on (context + prior events) -> next event pairs.

Defaults: batch size 64, learning rate 1e-4, Adam epsilon 1e-8, 5 epochs,
seed 42, max source length 1024; the saved artifact is the checkpoint of
the epoch with the lowest mean loss.
"""

import copy

import torch
from torch.nn import functional as F

from .data import load_event_corpus, make_training_pairs
from .model import EventSeq2Seq, ModelConfig, save_artifact
from .vocab import Vocab


def _pad_batch(sequences, pad_id, device):
    width = max(len(s) for s in sequences)
    ids = torch.full((len(sequences), width), pad_id, dtype=torch.long, device=device)
    for i, seq in enumerate(sequences):
        ids[i, : len(seq)] = torch.tensor(seq, dtype=torch.long, device=device)
    return ids, ids.eq(pad_id)


def train(
    corpus_path,
    output_path,
    epochs=5,
    batch_size=64,
    lr=1e-4,
    adam_eps=1e-8,
    seed=42,
    max_source_len=1024,
    d_model=128,
    nhead=4,
    num_layers=2,
    ffn_dim=256,
    dropout=0.1,
    max_target_len=16,
    device="cpu",
    log=None,
):
    """Train on an extracted-events file and save the artifact to output_path.

    Returns {"step_losses", "epoch_losses", "best_epoch", "pairs"}.

    Raises:
        ValueError: the corpus yields no training pairs.
    """
    stories = load_event_corpus(corpus_path)
    pairs = make_training_pairs(stories)
    if not pairs:
        raise ValueError(f"{corpus_path}: no training pairs (need stories with >= 2 events)")

    torch.manual_seed(seed)
    vocab = Vocab.build([s for s, _ in pairs] + [t for _, t in pairs])
    cfg = ModelConfig(
        vocab_size=len(vocab),
        d_model=d_model,
        nhead=nhead,
        num_layers=num_layers,
        ffn_dim=ffn_dim,
        dropout=dropout,
        max_len=max_source_len,
        max_target_len=max_target_len,
    )
    model = EventSeq2Seq(cfg).to(device)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr, eps=adam_eps)

    encoded = [
        (
            vocab.encode(src)[:max_source_len],
            [vocab.bos_id] + vocab.encode(tgt) + [vocab.eos_id],
        )
        for src, tgt in pairs
    ]

    shuffler = torch.Generator().manual_seed(seed)
    step_losses = []
    epoch_losses = []
    best_loss = float("inf")
    best_epoch = -1
    best_state = None
    model.train()
    for epoch in range(epochs):
        order = torch.randperm(len(encoded), generator=shuffler).tolist()
        epoch_steps = []
        for start in range(0, len(order), batch_size):
            batch = [encoded[i] for i in order[start : start + batch_size]]
            src, src_pad = _pad_batch([s for s, _ in batch], vocab.pad_id, device)
            tgt, tgt_pad = _pad_batch([t for _, t in batch], vocab.pad_id, device)
            logits = model(src, src_pad, tgt[:, :-1], tgt_pad[:, :-1])
            loss = F.cross_entropy(
                logits.reshape(-1, cfg.vocab_size),
                tgt[:, 1:].reshape(-1),
                ignore_index=vocab.pad_id,
            )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            epoch_steps.append(float(loss.detach()))
        step_losses.extend(epoch_steps)
        mean_loss = sum(epoch_steps) / len(epoch_steps)
        epoch_losses.append(mean_loss)
        if log:
            log(f"epoch {epoch + 1}/{epochs}: mean loss {mean_loss:.4f} ({len(epoch_steps)} steps)")
        if mean_loss < best_loss:
            best_loss = mean_loss
            best_epoch = epoch
            best_state = copy.deepcopy(model.state_dict())

    model.load_state_dict(best_state)
    save_artifact(
        model,
        vocab,
        output_path,
        meta={
            "pairs": len(pairs),
            "epochs": epochs,
            "batch_size": batch_size,
            "lr": lr,
            "adam_eps": adam_eps,
            "seed": seed,
            "best_epoch": best_epoch,
            "best_loss": best_loss,
        },
    )
    return {
        "step_losses": step_losses,
        "epoch_losses": epoch_losses,
        "best_epoch": best_epoch,
        "pairs": len(pairs),
    }
