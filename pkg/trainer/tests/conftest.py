"""Fixtures: a small generated group produced through the dataset CLI."""

from __future__ import annotations

import subprocess

import pytest

GENERATE = [
    "sallyanne", "generate", "--n", "4", "--m", "4", "--q", "3",
    "--seed", "20260810", "--cap", "12", "--train-structures", "8",
]


@pytest.fixture(scope="session")
def group_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("task_group") / "g443"
    subprocess.run(GENERATE + ["--out", str(out)], check=True, capture_output=True)
    return out


@pytest.fixture(scope="session")
def tiny_train_file(group_dir, tmp_path_factory):
    """600 stride-sampled train records for fast smoke training."""
    out = tmp_path_factory.mktemp("subset") / "train600.jsonl"
    with open(group_dir / "train.jsonl", encoding="utf-8") as handle:
        lines = handle.readlines()
    stride = len(lines) // 600
    out.write_text("".join(lines[::stride][:600]), encoding="utf-8")
    return out
