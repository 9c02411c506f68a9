"""Loss masking, determinism and short-run learning behavior."""

from __future__ import annotations

import json

import pytest
import torch

from toytom.data import collate, encode_sequence, load_records, vocab_from_records
from toytom.model import ModelConfig, TinyDecoder
from toytom.training import TrainConfig, masked_answer_loss, train


def small_batch(group_dir, count=6):
    records = load_records(group_dir / "train.jsonl", limit=count)
    vocab = vocab_from_records([records])
    sequences = [encode_sequence(r, vocab) for r in records]
    inputs, targets, positions = collate(sequences, vocab.pad_id)
    return vocab, inputs, targets, positions


class TestMaskedLoss:
    def test_gradient_zero_outside_answer_span(self, group_dir):
        vocab, inputs, targets, positions = small_batch(group_dir)
        torch.manual_seed(0)
        model = TinyDecoder(
            ModelConfig(vocab_size=len(vocab), dim=32, layers=1, heads=2,
                        max_seq=inputs.shape[1] + 1)
        )
        logits = model(inputs)
        logits.retain_grad()
        loss, _ = masked_answer_loss(logits, targets, positions)
        loss.backward()
        grad = logits.grad
        mask = torch.zeros_like(grad, dtype=torch.bool)
        mask[torch.arange(len(positions)), positions] = True
        assert grad[mask].abs().sum() > 0
        assert grad[~mask].abs().max() == 0.0

    def test_finite_difference_probe(self, group_dir):
        # perturbing a logit outside the answer span leaves the loss unchanged
        vocab, inputs, targets, positions = small_batch(group_dir, count=2)
        torch.manual_seed(0)
        model = TinyDecoder(
            ModelConfig(vocab_size=len(vocab), dim=32, layers=1, heads=2,
                        max_seq=inputs.shape[1] + 1)
        )
        with torch.no_grad():
            logits = model(inputs)
        base, _ = masked_answer_loss(logits, targets, positions)
        poked = logits.clone()
        off_position = int(positions[0]) - 3
        poked[0, off_position, 5] += 10.0
        after, _ = masked_answer_loss(poked, targets, positions)
        assert torch.equal(base, after)
        poked[0, int(positions[0]), 5] += 10.0
        changed, _ = masked_answer_loss(poked, targets, positions)
        assert not torch.equal(base, changed)


class TestTrainLoop:
    def run(self, tiny_train_file, tmp_path, tag, seed=3, epochs=3):
        out = tmp_path / tag
        entry = train(
            TrainConfig(
                train_path=str(tiny_train_file), out_dir=str(out),
                dim=48, layers=1, heads=2, batch_size=64, epochs=epochs,
                learning_rate=2e-3, warmup_steps=10, seed=seed, threads=1,
            )
        )
        log = [
            json.loads(line) for line in open(out / "training_log.jsonl")
        ]
        return entry, [e for e in log if e.get("event") == "epoch"], out

    def test_loss_decreases_over_first_epochs(self, tiny_train_file, tmp_path):
        _, epochs, _ = self.run(tiny_train_file, tmp_path, "decrease")
        losses = [e["loss"] for e in epochs[:3]]
        assert losses[0] > losses[1] > losses[2]

    def test_same_seed_same_first_epoch_loss(self, tiny_train_file, tmp_path):
        _, first, _ = self.run(tiny_train_file, tmp_path, "a", epochs=1)
        _, second, _ = self.run(tiny_train_file, tmp_path, "b", epochs=1)
        assert abs(first[0]["loss"] - second[0]["loss"]) < 1e-6

    def test_checkpoint_artifacts(self, tiny_train_file, tmp_path):
        _, _, out = self.run(tiny_train_file, tmp_path, "artifacts", epochs=1)
        assert (out / "checkpoint.pt").exists()
        assert (out / "vocab.json").exists()
        payload = torch.load(out / "checkpoint.pt", map_location="cpu")
        assert payload["answer_token_ids"]


class TestModelConfig:
    def test_heads_must_divide_dim(self):
        with pytest.raises(ValueError):
            ModelConfig(vocab_size=10, dim=30, heads=4)

    def test_sequence_cap_enforced(self):
        model = TinyDecoder(ModelConfig(vocab_size=10, dim=16, layers=1, heads=2,
                                        max_seq=8))
        with pytest.raises(ValueError):
            model(torch.zeros((1, 9), dtype=torch.long))
