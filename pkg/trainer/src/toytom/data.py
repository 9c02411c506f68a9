"""Record loading and sequence encoding for the line-delimited dataset files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .vocab import ANS, EOS, Vocab, build_vocab, tokenize


@dataclass
class Record:
    sample_id: str
    k: int
    scene: str
    query: str
    answer: str


def load_records(
    path: str | Path, limit: int | None = None, stride: int = 1
) -> list[Record]:
    """Read every `stride`-th record, up to `limit` of them."""
    records: list[Record] = []
    with open(path, encoding="utf-8") as handle:
        for i, line in enumerate(handle):
            if i % stride:
                continue
            obj = json.loads(line)
            records.append(
                Record(
                    sample_id=obj["sample_id"],
                    k=obj["k"],
                    scene=obj["scene"],
                    query=obj["query"],
                    answer=obj["answer"],
                )
            )
            if limit is not None and len(records) >= limit:
                break
    return records


def vocab_from_records(record_sets: list[list[Record]]) -> Vocab:
    def texts():
        for records in record_sets:
            for rec in records:
                yield rec.scene
                yield rec.query
                yield rec.answer

    return build_vocab(texts())


def answer_token_ids(records: list[Record], vocab: Vocab) -> list[int]:
    """Ids of every token observed as an answer; the constrained-decode set."""
    return sorted({vocab.index[rec.answer] for rec in records})


def encode_sequence(rec: Record, vocab: Vocab) -> tuple[list[int], int]:
    """Token ids for scene+query+answer and the answer's position.

    Layout: scene tokens, newline, query tokens, <ans>, answer token, <eos>.
    The returned position indexes the answer token itself.
    """
    words = tokenize(rec.scene) + ["\n"] + tokenize(rec.query) + [ANS, rec.answer, EOS]
    ids = vocab.encode(words)
    return ids, len(ids) - 2


def encode_prompt(rec: Record, vocab: Vocab) -> list[int]:
    """Token ids up to and including <ans>, ready for answer prediction."""
    words = tokenize(rec.scene) + ["\n"] + tokenize(rec.query) + [ANS]
    return vocab.encode(words)


def collate(
    sequences: list[tuple[list[int], int]], pad_id: int
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """Pad to the batch maximum; returns (inputs, targets, answer positions).

    Inputs drop the last token and targets drop the first, so the answer
    position in next-token space is the index of <ans> within the inputs.
    """
    width = max(len(ids) for ids, _ in sequences)
    batch = torch.full((len(sequences), width), pad_id, dtype=torch.long)
    positions = torch.empty(len(sequences), dtype=torch.long)
    for row, (ids, answer_pos) in enumerate(sequences):
        batch[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        positions[row] = answer_pos - 1
    return batch[:, :-1], batch[:, 1:], positions
