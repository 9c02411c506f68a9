"""Closed word-level vocabulary over the generated language space.

The task language is closed by construction, so tokenization is plain word
splitting with punctuation and newlines as their own tokens; any word outside
the induced vocabulary signals drift between the dataset and the trainer and
raises immediately.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

PAD = "<pad>"
ANS = "<ans>"
EOS = "<eos>"
SPECIALS = (PAD, ANS, EOS)

_WORD_RE = re.compile(r"\w+|[^\w\s]")
_PUNCT_RE = re.compile(r"^[^\w\s]$")


class OOVError(ValueError):
    """A token falls outside the closed vocabulary."""


def tokenize(text: str) -> list[str]:
    """Split into words, punctuation marks and explicit newline tokens."""
    tokens: list[str] = []
    for i, line in enumerate(text.split("\n")):
        if i:
            tokens.append("\n")
        tokens.extend(_WORD_RE.findall(line))
    return tokens


def detokenize(tokens: Iterable[str]) -> str:
    """Inverse of `tokenize` on generated text."""
    parts: list[str] = []
    at_line_start = True
    for token in tokens:
        if token == "\n":
            parts.append("\n")
            at_line_start = True
            continue
        if not at_line_start and not _PUNCT_RE.match(token):
            parts.append(" ")
        parts.append(token)
        at_line_start = False
    return "".join(parts)


@dataclass
class Vocab:
    tokens: list[str]

    def __post_init__(self) -> None:
        self.index = {token: i for i, token in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return self.index[PAD]

    @property
    def ans_id(self) -> int:
        return self.index[ANS]

    @property
    def eos_id(self) -> int:
        return self.index[EOS]

    def encode(self, words: Iterable[str]) -> list[int]:
        try:
            return [self.index[w] for w in words]
        except KeyError as e:
            raise OOVError(f"token {e.args[0]!r} not in the closed vocabulary")

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self.tokens[i] for i in ids]

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps({"tokens": self.tokens}, indent=0), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "Vocab":
        return cls(tokens=json.loads(Path(path).read_text("utf-8"))["tokens"])


def build_vocab(texts: Iterable[str]) -> Vocab:
    """Induce the vocabulary from dataset text, specials first."""
    seen: dict[str, None] = {}
    for text in texts:
        for token in tokenize(text):
            seen.setdefault(token)
    return Vocab(tokens=list(SPECIALS) + sorted(seen))
