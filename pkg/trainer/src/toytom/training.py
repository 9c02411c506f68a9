"""Training loop: masked next-token loss on the answer span, warmup + cosine."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from random import Random

import torch
import torch.nn.functional as F

from .data import (
    answer_token_ids,
    collate,
    encode_sequence,
    load_records,
    vocab_from_records,
)
from .model import ModelConfig, TinyDecoder
from .vocab import Vocab

CHECKPOINT_NAME = "checkpoint.pt"
VOCAB_NAME = "vocab.json"
LOG_NAME = "training_log.jsonl"


@dataclass
class TrainConfig:
    train_path: str
    out_dir: str
    vocab_paths: tuple[str, ...] = ()
    limit: int | None = None
    stride: int = 1
    dim: int = 128
    layers: int = 3
    heads: int = 4
    batch_size: int = 128
    epochs: int = 10
    learning_rate: float = 1e-3
    warmup_steps: int = 100
    min_lr_fraction: float = 0.1
    weight_decay: float = 0.01
    seed: int = 0
    threads: int = 1
    target_accuracy: float | None = None
    extra: dict = field(default_factory=dict)


def lr_at(step: int, total_steps: int, config: TrainConfig) -> float:
    """Linear warmup to the peak rate, then cosine decay to a floor."""
    peak = config.learning_rate
    if step < config.warmup_steps:
        return peak * (step + 1) / config.warmup_steps
    span = max(1, total_steps - config.warmup_steps)
    progress = min(1.0, (step - config.warmup_steps) / span)
    floor = peak * config.min_lr_fraction
    return floor + 0.5 * (peak - floor) * (1 + math.cos(math.pi * progress))


def masked_answer_loss(
    logits: torch.Tensor, targets: torch.Tensor, positions: torch.Tensor
) -> tuple[torch.Tensor, torch.Tensor]:
    """Cross-entropy restricted to the answer positions; also argmax hits."""
    rows = torch.arange(logits.shape[0], device=logits.device)
    answer_logits = logits[rows, positions]
    answer_targets = targets[rows, positions]
    loss = F.cross_entropy(answer_logits, answer_targets)
    hits = (answer_logits.argmax(dim=-1) == answer_targets).sum()
    return loss, hits


def _batches(order: list[int], batch_size: int):
    for start in range(0, len(order), batch_size):
        yield order[start : start + batch_size]


def train(config: TrainConfig) -> dict:
    """Run the full loop; returns the final log entry."""
    torch.manual_seed(config.seed)
    torch.set_num_threads(config.threads)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = load_records(config.train_path, limit=config.limit, stride=config.stride)
    if not records:
        raise ValueError(f"no records loaded from {config.train_path}")
    vocab_sets = [records]
    for extra_path in config.vocab_paths:
        vocab_sets.append(load_records(extra_path))
    vocab = vocab_from_records(vocab_sets)
    vocab.save(out_dir / VOCAB_NAME)

    sequences = [encode_sequence(rec, vocab) for rec in records]
    max_seq = max(len(ids) for ids, _ in sequences) + 1
    model = TinyDecoder(
        ModelConfig(
            vocab_size=len(vocab),
            dim=config.dim,
            layers=config.layers,
            heads=config.heads,
            max_seq=max_seq,
        )
    )
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.learning_rate,
        weight_decay=config.weight_decay,
    )

    steps_per_epoch = math.ceil(len(sequences) / config.batch_size)
    total_steps = steps_per_epoch * config.epochs
    shuffler = Random(config.seed)
    order = list(range(len(sequences)))
    step = 0
    started = time.monotonic()
    last_entry: dict = {}

    with open(out_dir / LOG_NAME, "w", encoding="utf-8") as log:
        header = {
            "event": "start",
            "records": len(records),
            "vocab_size": len(vocab),
            "parameters": model.parameter_count(),
            "config": {k: v for k, v in asdict(config).items() if k != "extra"},
        }
        log.write(json.dumps(header) + "\n")
        for epoch in range(config.epochs):
            shuffler.shuffle(order)
            epoch_loss = 0.0
            epoch_hits = 0
            model.train()
            for batch_ids in _batches(order, config.batch_size):
                inputs, targets, positions = collate(
                    [sequences[i] for i in batch_ids], vocab.pad_id
                )
                lr = lr_at(step, total_steps, config)
                for group in optimizer.param_groups:
                    group["lr"] = lr
                logits = model(inputs)
                loss, hits = masked_answer_loss(logits, targets, positions)
                optimizer.zero_grad(set_to_none=True)
                loss.backward()
                optimizer.step()
                step += 1
                epoch_loss += loss.item() * len(batch_ids)
                epoch_hits += int(hits)
            last_entry = {
                "event": "epoch",
                "epoch": epoch,
                "loss": epoch_loss / len(sequences),
                "answer_accuracy": epoch_hits / len(sequences),
                "lr": lr,
                "seconds": round(time.monotonic() - started, 2),
            }
            log.write(json.dumps(last_entry) + "\n")
            log.flush()
            if (
                config.target_accuracy is not None
                and last_entry["answer_accuracy"] >= config.target_accuracy
            ):
                break

    torch.save(
        {
            "model_state": model.state_dict(),
            "model_config": asdict(model.config),
            "train_config": {k: v for k, v in asdict(config).items() if k != "extra"},
            "answer_token_ids": answer_token_ids(records, vocab),
        },
        out_dir / CHECKPOINT_NAME,
    )
    return last_entry


def load_checkpoint(ckpt_dir: str | Path) -> tuple[TinyDecoder, Vocab, list[int]]:
    ckpt_dir = Path(ckpt_dir)
    payload = torch.load(ckpt_dir / CHECKPOINT_NAME, map_location="cpu")
    model = TinyDecoder(ModelConfig(**payload["model_config"]))
    model.load_state_dict(payload["model_state"])
    model.eval()
    vocab = Vocab.load(ckpt_dir / VOCAB_NAME)
    return model, vocab, payload["answer_token_ids"]
