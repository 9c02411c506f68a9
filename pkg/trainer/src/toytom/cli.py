"""Command-line wrapper: train on a group's file, predict on its eval file."""

from __future__ import annotations

import argparse
import json
import sys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toytom")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit the toy model on a train file")
    p.add_argument("--train", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--vocab-extra", action="append", default=[],
                   help="additional record files the vocabulary must cover")
    p.add_argument("--limit", type=int)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--dim", type=int, default=128)
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--warmup-steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--target-accuracy", type=float)

    p = sub.add_parser("predict", help="emit a predictions file")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--eval", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--batch-size", type=int, default=64)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            from .training import TrainConfig, train

            entry = train(
                TrainConfig(
                    train_path=args.train,
                    out_dir=args.out,
                    vocab_paths=tuple(args.vocab_extra),
                    limit=args.limit,
                    stride=args.stride,
                    dim=args.dim,
                    layers=args.layers,
                    heads=args.heads,
                    batch_size=args.batch_size,
                    epochs=args.epochs,
                    learning_rate=args.lr,
                    warmup_steps=args.warmup_steps,
                    seed=args.seed,
                    threads=args.threads,
                    target_accuracy=args.target_accuracy,
                )
            )
            print(json.dumps(entry))
            return 0
        if args.command == "predict":
            from .predict import predict_file

            count = predict_file(
                args.ckpt, args.eval, args.out,
                limit=args.limit, batch_size=args.batch_size,
            )
            print(json.dumps({"predictions": count, "out": args.out}))
            return 0
        raise AssertionError(args.command)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
