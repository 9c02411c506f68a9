"""Loop closure: generate -> train -> predict -> score, end to end.

Training must reach at least 99% first-order answer accuracy on a 10k-sample
subset within 30 minutes; the higher-order ratios from the scorer are
reported but not thresholded at this scale.
"""

from __future__ import annotations

import json
import subprocess
import time

from toytom.cli import main as toytom_main

SUBSET = 10_000
EVAL_SUBSET = 3_000
BUDGET_SECONDS = 1_800


def test_loop_closure(group_dir, tmp_path):
    train_subset = tmp_path / "train10k.jsonl"
    with open(group_dir / "train.jsonl", encoding="utf-8") as handle:
        lines = handle.readlines()
    stride = len(lines) // SUBSET
    train_subset.write_text("".join(lines[::stride][:SUBSET]), encoding="utf-8")

    eval_subset = tmp_path / "eval3k.jsonl"
    with open(group_dir / "eval.jsonl", encoding="utf-8") as handle:
        eval_lines = [next(handle) for _ in range(EVAL_SUBSET)]
    eval_subset.write_text("".join(eval_lines), encoding="utf-8")

    ckpt = tmp_path / "ckpt"
    started = time.monotonic()
    code = toytom_main([
        "train",
        "--train", str(train_subset),
        "--out", str(ckpt),
        "--vocab-extra", str(eval_subset),
        "--dim", "96", "--layers", "2", "--heads", "4",
        "--batch-size", "32", "--epochs", "40",
        "--lr", "2e-3", "--warmup-steps", "100",
        "--seed", "1", "--threads", "1",
        "--target-accuracy", "0.99",
    ])
    elapsed = time.monotonic() - started
    assert code == 0
    log = [json.loads(l) for l in open(ckpt / "training_log.jsonl")]
    final = [e for e in log if e.get("event") == "epoch"][-1]
    assert elapsed < BUDGET_SECONDS, f"training took {elapsed:.0f}s"
    assert final["answer_accuracy"] >= 0.99, final

    preds = tmp_path / "preds.jsonl"
    code = toytom_main([
        "predict", "--ckpt", str(ckpt), "--eval", str(eval_subset),
        "--out", str(preds),
    ])
    assert code == 0
    pred_lines = preds.read_text().splitlines()
    assert len(pred_lines) == EVAL_SUBSET

    # every prediction stays inside the container vocabulary by construction
    container_names = set()
    for line in eval_lines:
        container_names.add(json.loads(line)["answer"])
    for line in pred_lines:
        assert json.loads(line)["prediction"] in container_names

    scored = subprocess.run(
        ["sallyanne", "score", "--data", str(eval_subset), "--pred", str(preds),
         "--format", "json"],
        capture_output=True, text=True, check=True,
    )
    report = json.loads(scored.stdout)
    ks = [row["k"] for row in report["orders"]]
    assert ks == [1, 2, 3]
    for row in report["orders"]:
        assert 0.0 <= row["accuracy"] <= 1.0
        assert row["ratio_to_baseline"] == row["accuracy"] * 3
    lines = ", ".join(
        f"k={row['k']}: acc={row['accuracy']:.3f} "
        f"ratio={row['ratio_to_baseline']:.2f}"
        for row in report["orders"]
    )
    print(
        f"\nACCEPTANCE loop-closure: PASS (train acc "
        f"{final['answer_accuracy']:.4f} in {elapsed:.0f}s; {lines})"
    )
