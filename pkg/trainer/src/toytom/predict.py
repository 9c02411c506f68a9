"""Constrained greedy decoding of answers into a predictions file."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import Record, encode_prompt, load_records
from .training import load_checkpoint
from .vocab import Vocab


def predict_records(
    model, vocab: Vocab, answer_ids: list[int], records: list[Record],
    batch_size: int = 64,
) -> list[str]:
    """Greedy answers, restricted to tokens ever observed as answers."""
    allowed = torch.tensor(answer_ids, dtype=torch.long)
    out: list[str] = []
    with torch.no_grad():
        for start in range(0, len(records), batch_size):
            chunk = records[start : start + batch_size]
            prompts = [encode_prompt(rec, vocab) for rec in chunk]
            width = max(len(p) for p in prompts)
            batch = torch.full((len(chunk), width), vocab.pad_id, dtype=torch.long)
            for row, prompt in enumerate(prompts):
                batch[row, : len(prompt)] = torch.tensor(prompt, dtype=torch.long)
            logits = model(batch)
            for row, prompt in enumerate(prompts):
                answer_logits = logits[row, len(prompt) - 1, allowed]
                out.append(vocab.tokens[answer_ids[int(answer_logits.argmax())]])
    return out


def predict_file(
    ckpt_dir: str | Path,
    eval_path: str | Path,
    out_path: str | Path,
    limit: int | None = None,
    batch_size: int = 64,
) -> int:
    """Write one {sample_id, prediction} line per record, in file order."""
    model, vocab, answer_ids = load_checkpoint(ckpt_dir)
    records = load_records(eval_path, limit=limit)
    predictions = predict_records(model, vocab, answer_ids, records, batch_size)
    with open(out_path, "w", encoding="utf-8") as handle:
        for rec, prediction in zip(records, predictions):
            handle.write(
                json.dumps(
                    {"sample_id": rec.sample_id, "prediction": prediction},
                    separators=(",", ":"),
                )
                + "\n"
            )
    return len(records)
