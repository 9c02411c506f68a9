"""Scoring of prediction files against generated datasets.

Predictions are exact-matched against stored answers (surrounding whitespace
ignored). The report aggregates accuracy per (structure, order) cell and per
order, with the held-out and train-structure populations reported separately
and pooled, the 1/q random baseline, accuracy/baseline ratios, and the
degradation deltas between consecutive orders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import SPLIT_HELDOUT, TaskSample
from .errors import ParseError, PredictionsError


@dataclass
class CellStats:
    structure_id: str
    k: int
    heldout: bool
    correct: int = 0
    total: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total


@dataclass
class OrderSummary:
    k: int
    correct: int = 0
    total: int = 0
    heldout_correct: int = 0
    heldout_total: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total

    @property
    def train_structure_accuracy(self) -> float | None:
        total = self.total - self.heldout_total
        if total == 0:
            return None
        return (self.correct - self.heldout_correct) / total

    @property
    def heldout_accuracy(self) -> float | None:
        if self.heldout_total == 0:
            return None
        return self.heldout_correct / self.heldout_total


@dataclass
class EvalReport:
    n: int
    m: int
    q: int
    cells: dict[tuple[str, int], CellStats] = field(default_factory=dict)
    orders: dict[int, OrderSummary] = field(default_factory=dict)

    @property
    def baseline(self) -> float:
        return 1.0 / self.q

    @property
    def deltas(self) -> list[tuple[int, int, float]]:
        """(k_a, k_b, mean(k_a) - mean(k_b)) for consecutive present orders."""
        ks = sorted(self.orders)
        return [
            (a, b, self.orders[a].accuracy - self.orders[b].accuracy)
            for a, b in zip(ks, ks[1:])
        ]

    def to_dict(self) -> dict:
        return {
            "group": {"n": self.n, "m": self.m, "q": self.q},
            "baseline": self.baseline,
            "orders": [
                {
                    "k": s.k,
                    "accuracy": s.accuracy,
                    "ratio_to_baseline": s.accuracy * self.q,
                    "count": s.total,
                    "train_structure_accuracy": s.train_structure_accuracy,
                    "heldout_accuracy": s.heldout_accuracy,
                    "heldout_count": s.heldout_total,
                }
                for _, s in sorted(self.orders.items())
            ],
            "deltas": [
                {"from_k": a, "to_k": b, "drop": drop} for a, b, drop in self.deltas
            ],
            "cells": [
                {
                    "structure_id": c.structure_id,
                    "k": c.k,
                    "heldout": c.heldout,
                    "accuracy": c.accuracy,
                    "count": c.total,
                }
                for _, c in sorted(self.cells.items())
            ],
        }


def _load_predictions(path: str | Path) -> dict[str, str]:
    predictions: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                sample_id, prediction = obj["sample_id"], obj["prediction"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise PredictionsError(f"line {line_no}: malformed prediction: {e}")
            if sample_id in predictions:
                raise PredictionsError(f"duplicate prediction for {sample_id}")
            predictions[sample_id] = str(prediction).strip()
    return predictions


def score(dataset_path: str | Path, predictions_path: str | Path) -> EvalReport:
    """Exact-match predictions against a records file.

    Every record must have exactly one prediction; predictions outside the
    dataset's answer vocabulary are rejected as unknown containers.
    """
    predictions = _load_predictions(predictions_path)
    report: EvalReport | None = None
    vocabulary: set[str] = set()
    used_values: set[str] = set()
    with open(dataset_path, encoding="utf-8") as handle:
        for line in handle:
            rec = TaskSample.from_line(line)
            if report is None:
                report = EvalReport(n=rec.n, m=rec.m, q=rec.q)
            elif (rec.n, rec.m, rec.q) != (report.n, report.m, report.q):
                raise ParseError("records file mixes group configurations")
            vocabulary.add(rec.answer)
            predicted = predictions.get(rec.sample_id)
            if predicted is None:
                raise PredictionsError(f"missing prediction for {rec.sample_id}")
            used_values.add(predicted)
            hit = predicted == rec.answer
            heldout = rec.split == SPLIT_HELDOUT

            cell = report.cells.get((rec.structure_id, rec.k))
            if cell is None:
                cell = CellStats(structure_id=rec.structure_id, k=rec.k, heldout=heldout)
                report.cells[(rec.structure_id, rec.k)] = cell
            cell.total += 1
            cell.correct += hit

            summary = report.orders.get(rec.k)
            if summary is None:
                summary = OrderSummary(k=rec.k)
                report.orders[rec.k] = summary
            summary.total += 1
            summary.correct += hit
            if heldout:
                summary.heldout_total += 1
                summary.heldout_correct += hit
    if report is None:
        raise ParseError(f"no records in {dataset_path}")
    unknown = used_values - vocabulary
    if unknown:
        raise PredictionsError(
            f"predictions outside the container vocabulary: {sorted(unknown)[:5]}"
        )
    assert sum(s.total for s in report.orders.values()) == sum(
        c.total for c in report.cells.values()
    )
    return report


def render_report(report: EvalReport, fmt: str = "table") -> str:
    """Machine-readable JSON or an aligned human-readable table."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    data = report.to_dict()
    lines = [
        f"group n={report.n} m={report.m} q={report.q}   "
        f"baseline={report.baseline:.4f}",
        "",
        f"{'k':>2}  {'accuracy':>9}  {'ratio':>7}  {'count':>9}  "
        f"{'train-acc':>9}  {'heldout-acc':>11}",
    ]
    for row in data["orders"]:
        train_acc = row["train_structure_accuracy"]
        heldout_acc = row["heldout_accuracy"]
        lines.append(
            f"{row['k']:>2}  {row['accuracy']:>9.4f}  "
            f"{row['ratio_to_baseline']:>7.4f}  {row['count']:>9}  "
            f"{train_acc if train_acc is None else format(train_acc, '.4f'):>9}  "
            f"{heldout_acc if heldout_acc is None else format(heldout_acc, '.4f'):>11}"
        )
    for row in data["deltas"]:
        lines.append(
            f"drop k={row['from_k']} -> k={row['to_k']}: {row['drop']:+.4f}"
        )
    lines.append("")
    lines.append(f"{'structure':>16}  {'k':>2}  {'accuracy':>9}  {'count':>7}  split")
    for cell in data["cells"]:
        lines.append(
            f"{cell['structure_id']:>16}  {cell['k']:>2}  {cell['accuracy']:>9.4f}  "
            f"{cell['count']:>7}  {'heldout' if cell['heldout'] else 'train'}"
        )
    return "\n".join(lines) + "\n"


__all__ = ["CellStats", "EvalReport", "OrderSummary", "render_report", "score"]
