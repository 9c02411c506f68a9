"""Command-line entry point: count, enumerate, generate, verify, oracle, score."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .belief_graph import enumerate_structures
from .counting import (
    count_structures_enumerative,
    count_structures_formula,
    dataset_size,
    graph_density,
)
from .dataset import GroupConfig, TaskSample, build_group, verify_dataset
from .errors import SallyAnneError
from .evaluator import render_report, score
from .oracle import BeliefFlow, derive_truth
from .scene import load_grammar, load_pools, parse_scene

STANDARD_CONFIGS = ((4, 4), (5, 7), (5, 8), (6, 7), (6, 8), (6, 9))


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 1, not 2
        self.print_usage(sys.stderr)
        raise SallyAnneError(message)


def _orders(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sallyanne")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="structure counts and dataset sizes")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--q", type=int, help="also print dataset sizes for this q")
    p.add_argument("--all", action="store_true", help="print the standard table")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("enumerate", help="list valid structures as JSON lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--limit", type=int)

    p = sub.add_parser("generate", help="build one experimental group")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cap", type=int, default=120)
    p.add_argument("--train-structures", type=int, default=112)
    p.add_argument("--learn-orders", type=_orders, default=(1,))
    p.add_argument("--gen-orders", type=_orders, default=(2, 3))
    p.add_argument("--samples-per-scene", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--pools")
    p.add_argument("--grammar")

    p = sub.add_parser("verify", help="re-derive a generated group")
    p.add_argument("--data", required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--pools")
    p.add_argument("--grammar")

    p = sub.add_parser("oracle", help="answer one scene + flow")
    p.add_argument("--record")
    p.add_argument("--line", type=int, default=1)
    p.add_argument("--scene")
    p.add_argument("--flow", type=_orders)
    p.add_argument("--pools")

    p = sub.add_parser("score", help="score a predictions file")
    p.add_argument("--data", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("table", "json", "both"), default="table")
    return parser


def _cmd_count(args) -> int:
    rows = []
    configs = STANDARD_CONFIGS if args.all else ((args.n, args.m),)
    if not args.all and (args.n is None or args.m is None):
        raise SallyAnneError("count needs --n and --m (or --all)")
    for n, m in configs:
        enum = count_structures_enumerative(n, m)
        formula = count_structures_formula(n, m)
        agree = enum.n_prime == formula.n_prime
        row = {
            "n": n,
            "m": m,
            "density": round(graph_density(n, m), 4),
            "n_prime": formula.n_prime,
            "n_total": formula.n_total,
            "methods_agree": agree,
        }
        if args.q or args.all:
            for q in (args.q,) if args.q else (3, 4):
                total, train, test = dataset_size(n, m, q)
                row[f"sizes_q{q}"] = {"total": total, "train": train, "test": test}
        rows.append(row)
        if not agree:
            raise SallyAnneError(f"count methods disagree for (n={n}, m={m})")
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    for row in rows:
        line = (
            f"n={row['n']} m={row['m']} density={row['density']:.2f}: "
            f"n_prime={row['n_prime']} n_total={row['n_total']:,}"
        )
        print(line)
        for key in sorted(k for k in row if k.startswith("sizes_q")):
            sizes = row[key]
            print(
                f"  {key[6:]}: total={sizes['total']:,} "
                f"train={sizes['train']:,} test={sizes['test']:,}"
            )
    return 0


def _cmd_enumerate(args) -> int:
    structures = enumerate_structures(args.n, args.m)
    limit = args.limit if args.limit is not None else len(structures)
    for structure in structures[:limit]:
        print(
            json.dumps(
                {
                    "structure_id": structure.structure_id,
                    "exit_order": list(structure.exit_order),
                    "edges": [list(e) for e in structure.sorted_edges],
                },
                separators=(",", ":"),
            )
        )
    print(f"total {len(structures)} structures", file=sys.stderr)
    return 0


def _cmd_generate(args) -> int:
    config = GroupConfig(
        n=args.n,
        m=args.m,
        q=args.q,
        master_seed=args.seed,
        learn_orders=args.learn_orders,
        gen_orders=args.gen_orders,
        structure_cap=args.cap,
        train_structures=args.train_structures,
        samples_per_scene=args.samples_per_scene,
        pools_path=args.pools,
        grammar_path=args.grammar,
    )
    result = build_group(config, args.out, workers=args.workers)
    print(json.dumps(result.manifest["counts"], indent=2))
    return 0


def _cmd_verify(args) -> int:
    pools = load_pools(args.pools) if args.pools else None
    grammar = load_grammar(args.grammar) if args.grammar else None
    report = verify_dataset(args.data, limit=args.limit, pools=pools, grammar=grammar)
    print(
        json.dumps(
            {
                "ok": report.ok,
                "records_checked": report.records_checked,
                "mismatches": report.mismatches,
                "schema_violations": report.schema_violations,
                "count_deltas": report.count_deltas,
                "expected_sizes": report.expected_sizes,
            },
            indent=2,
        )
    )
    return 0 if report.ok else 1


def _cmd_oracle(args) -> int:
    pools = load_pools(args.pools)
    if args.record:
        with open(args.record, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if line_no == args.line:
                    break
            else:
                raise SallyAnneError(f"{args.record} has no line {args.line}")
        rec = TaskSample.from_line(line)
        parsed = parse_scene(rec.scene, pools)
        flow = BeliefFlow(characters=rec.flow)
        derived = parsed.structure  # structure re-read from the text itself
        answer_idx = derive_truth(derived, parsed.beliefs, flow)
        containers = _scene_containers(rec.scene, pools)
        answer = containers[answer_idx]
        print(
            json.dumps(
                {
                    "sample_id": rec.sample_id,
                    "stored_answer": rec.answer,
                    "derived_answer": answer,
                    "match": answer == rec.answer,
                }
            )
        )
        return 0 if answer == rec.answer else 1
    if not args.scene or not args.flow:
        raise SallyAnneError("oracle needs --record or both --scene and --flow")
    text = Path(args.scene).read_text("utf-8").rstrip("\n")
    parsed = parse_scene(text, pools)
    flow = BeliefFlow(characters=args.flow)
    answer_idx = derive_truth(parsed.structure, parsed.beliefs, flow)
    print(_scene_containers(text, pools)[answer_idx])
    return 0


def _scene_containers(text: str, pools) -> list[str]:
    from .scene import declared_containers

    return declared_containers(text)


def _cmd_score(args) -> int:
    report = score(args.data, args.pred)
    formats = ("table", "json") if args.format == "both" else (args.format,)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for fmt in formats:
            suffix = "txt" if fmt == "table" else "json"
            (out / f"report.{suffix}").write_text(
                render_report(report, fmt), encoding="utf-8"
            )
        print(f"report written to {out}")
    else:
        for fmt in formats:
            print(render_report(report, fmt), end="")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "count": _cmd_count,
            "enumerate": _cmd_enumerate,
            "generate": _cmd_generate,
            "verify": _cmd_verify,
            "oracle": _cmd_oracle,
            "score": _cmd_score,
        }[args.command]
        return handler(args)
    except SallyAnneError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # internal failure
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
