"""Scoring harness: exact-match aggregation, baselines and report rendering."""

from __future__ import annotations

import json
from random import Random

import pytest

from sallyanne.dataset import TaskSample
from sallyanne.errors import PredictionsError
from sallyanne.evaluator import EvalReport, OrderSummary, render_report, score


def write_predictions(path, pairs):
    with open(path, "w", encoding="utf-8") as handle:
        for sample_id, prediction in pairs:
            handle.write(json.dumps({"sample_id": sample_id, "prediction": prediction}))
            handle.write("\n")


def oracle_pairs(dataset_path):
    with open(dataset_path, encoding="utf-8") as handle:
        for line in handle:
            rec = TaskSample.from_line(line)
            yield rec.sample_id, rec.answer


class TestScore:
    def test_oracle_predictions_score_one(self, small_group, tmp_path):
        preds = tmp_path / "oracle.jsonl"
        write_predictions(preds, oracle_pairs(small_group.eval_path))
        report = score(small_group.eval_path, preds)
        assert sorted(report.orders) == [1, 2, 3]
        for k, summary in report.orders.items():
            assert summary.accuracy == 1.0
            assert summary.heldout_accuracy == 1.0
        for cell in report.cells.values():
            assert cell.accuracy == 1.0
        assert all(drop == 0.0 for _, _, drop in report.deltas)

    def test_counts_cover_dataset(self, small_group, tmp_path):
        preds = tmp_path / "oracle.jsonl"
        write_predictions(preds, oracle_pairs(small_group.eval_path))
        report = score(small_group.eval_path, preds)
        total = sum(s.total for s in report.orders.values())
        with open(small_group.eval_path) as handle:
            assert total == sum(1 for _ in handle)

    def test_prediction_order_is_irrelevant(self, small_group, tmp_path):
        pairs = list(oracle_pairs(small_group.eval_path))
        straight, shuffled = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_predictions(straight, pairs)
        Random(5).shuffle(pairs)
        write_predictions(shuffled, pairs)
        a = score(small_group.eval_path, straight).to_dict()
        b = score(small_group.eval_path, shuffled).to_dict()
        assert a == b

    def test_constant_prediction_matches_frequency(self, small_group, tmp_path):
        records = [
            TaskSample.from_line(line) for line in open(small_group.eval_path)
        ]
        target = records[0].answer
        preds = tmp_path / "const.jsonl"
        write_predictions(preds, ((r.sample_id, target) for r in records))
        report = score(small_group.eval_path, preds)
        total = sum(s.total for s in report.orders.values())
        hits = sum(s.correct for s in report.orders.values())
        assert hits == sum(1 for r in records if r.answer == target)
        assert total == len(records)

    def test_missing_prediction(self, small_group, tmp_path):
        pairs = list(oracle_pairs(small_group.eval_path))[:-1]
        preds = tmp_path / "short.jsonl"
        write_predictions(preds, pairs)
        with pytest.raises(PredictionsError, match="missing"):
            score(small_group.eval_path, preds)

    def test_duplicate_prediction(self, small_group, tmp_path):
        pairs = list(oracle_pairs(small_group.eval_path))
        preds = tmp_path / "dup.jsonl"
        write_predictions(preds, pairs + [pairs[0]])
        with pytest.raises(PredictionsError, match="duplicate"):
            score(small_group.eval_path, preds)

    def test_unknown_container(self, small_group, tmp_path):
        pairs = list(oracle_pairs(small_group.eval_path))
        pairs[3] = (pairs[3][0], "wardrobe")
        preds = tmp_path / "unk.jsonl"
        write_predictions(preds, pairs)
        with pytest.raises(PredictionsError, match="vocabulary"):
            score(small_group.eval_path, preds)

    def test_whitespace_trimmed(self, small_group, tmp_path):
        pairs = [(sid, f"  {ans} ") for sid, ans in oracle_pairs(small_group.eval_path)]
        preds = tmp_path / "pad.jsonl"
        write_predictions(preds, pairs)
        report = score(small_group.eval_path, preds)
        assert all(s.accuracy == 1.0 for s in report.orders.values())


class TestReportArithmetic:
    def make_report(self):
        report = EvalReport(n=4, m=4, q=3)
        for k, accuracy in ((1, 0.99), (2, 0.66), (3, 0.60)):
            summary = OrderSummary(k=k, correct=int(accuracy * 10000), total=10000)
            report.orders[k] = summary
        return report

    def test_ratios_and_deltas(self):
        report = self.make_report()
        data = report.to_dict()
        ratios = [round(row["ratio_to_baseline"], 2) for row in data["orders"]]
        assert ratios == [2.97, 1.98, 1.80]
        drops = [round(d["drop"], 2) for d in data["deltas"]]
        assert drops == [0.33, 0.06]

    def test_baseline(self):
        assert EvalReport(n=4, m=4, q=3).baseline == pytest.approx(1 / 3)
        assert EvalReport(n=4, m=4, q=4).baseline == 0.25


class TestRender:
    def test_stable_bytes(self, small_group, tmp_path):
        preds = tmp_path / "p.jsonl"
        write_predictions(preds, oracle_pairs(small_group.eval_path))
        report = score(small_group.eval_path, preds)
        assert render_report(report, "json") == render_report(report, "json")
        assert render_report(report, "table") == render_report(report, "table")

    def test_table_has_cell_rows_and_ratio(self, small_group, tmp_path):
        preds = tmp_path / "p.jsonl"
        write_predictions(preds, oracle_pairs(small_group.eval_path))
        report = score(small_group.eval_path, preds)
        table = render_report(report, "table")
        assert table.count("\n") >= len(report.cells) + len(report.orders)
        assert "3.0000" in table  # accuracy 1.0 at q=3 -> ratio 3
        with pytest.raises(ValueError):
            render_report(report, "yaml")
