"""Character- and token-level alignment of OCR output against ground truth.

Character alignments use unit-cost primitive edits extended with 2:1
merges, 1:2 splits and atomic 2:2 pair rewrites. Among equal-cost
alignments the one with fewer ops wins; remaining ties place edits as late
in the word as possible, then follow the op-kind order below.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import kernels
from .corpus_io import Document, Token

OP_KINDS = ("match", "substitute", "delete", "insert", "merge", "split", "pair")
_SPANS = dict(zip(OP_KINDS, kernels.OP_SPANS))


@dataclass(frozen=True)
class EditOp:
    kind: str
    source: str
    target: str

    def __post_init__(self):
        if self.kind not in _SPANS:
            raise ValueError(f"unknown op kind {self.kind!r}")
        if (len(self.source), len(self.target)) != _SPANS[self.kind]:
            raise ValueError(f"segment lengths do not fit {self.kind}: {self.source!r}->{self.target!r}")
        if (self.kind == "match") != (self.source == self.target):
            raise ValueError(f"{self.kind} op with segments {self.source!r}->{self.target!r}")


@dataclass(frozen=True)
class Alignment:
    ops: tuple[EditOp, ...]
    cost: int

    @property
    def source(self) -> str:
        return "".join(op.source for op in self.ops)

    @property
    def target(self) -> str:
        return "".join(op.target for op in self.ops)

    @property
    def edits(self) -> list[EditOp]:
        return [op for op in self.ops if op.kind != "match"]


@dataclass(frozen=True)
class EditInstance:
    """One corruption -> correction segment pair (OCR side -> truth side)."""

    corruption: str
    correction: str
    count: int = 1

    def __post_init__(self):
        if self.corruption == self.correction:
            raise ValueError("corruption equals correction")
        if len(self.corruption) > 2 or len(self.correction) > 2:
            raise ValueError("segments longer than two characters")
        if self.count < 1:
            raise ValueError("count must be positive")

    @property
    def key(self) -> tuple[str, str]:
        return self.corruption, self.correction


def align_words(ocr_word: str, truth_word: str) -> Alignment:
    cost, codes = kernels.align_ops(ocr_word, truth_word)
    ops = []
    i = j = 0
    for code in codes:
        di, dj = kernels.OP_SPANS[code]
        ops.append(EditOp(OP_KINDS[code], ocr_word[i:i + di], truth_word[j:j + dj]))
        i += di
        j += dj
    return Alignment(tuple(ops), cost)


def alignment_cost(ocr_word: str, truth_word: str) -> int:
    """Cost of :func:`align_words` without building the op list."""
    return kernels.align_cost(ocr_word, truth_word)


def extract_edit_instances(alignment: Alignment) -> list[EditInstance]:
    """Edit instances of an alignment inside the correctable class.

    The class is exactly the cost-1 alignments: a single substitution,
    deletion, insertion, merge, split or 2:2 pair.
    """
    if alignment.cost != 1:
        return []
    return [EditInstance(op.source, op.target) for op in alignment.edits]


class TokenLink(NamedTuple):
    """One step of a token-level alignment.

    ``kind`` is one of match, substitute, delete (OCR token unmatched),
    insert (truth token unmatched), join (two OCR tokens form one truth
    token) or split (one OCR token holds two truth tokens).
    """

    kind: str
    ocr: tuple[int, ...]
    truth: tuple[int, ...]


TOKEN_KINDS = ("match", "substitute", "delete", "insert", "join", "split")


def align_documents(ocr: Document, truth: Document) -> list[TokenLink]:
    """Full monotone token alignment, including segmentation sites.

    Substitution costs the character alignment cost, an unmatched token
    costs its length, and a pure whitespace edit (join or split) costs 1.
    """
    _, ops = kernels.align_tokens(ocr.surfaces, truth.surfaces)
    links = []
    for code, i, j in ops:
        di, dj = kernels.TOKEN_SPANS[code]
        links.append(TokenLink(TOKEN_KINDS[code], tuple(range(i, i + di)), tuple(range(j, j + dj))))
    return links


def pair_documents(ocr: Document, truth: Document) -> list[tuple[Token, str]]:
    """1:1 word pairs of the token alignment; segmentation sites are left out."""
    pairs = []
    for link in align_documents(ocr, truth):
        if link.kind in ("match", "substitute"):
            pairs.append((ocr.tokens[link.ocr[0]], truth.tokens[link.truth[0]].surface))
    return pairs


class OcrTarget(NamedTuple):
    """What one OCR token should have been.

    ``truth`` is the expected replacement surface (two words joined by a
    space for a missing-space site); ``None`` when the token is wrong but
    has no recoverable target on its own.
    """

    correct: bool
    truth: str | None
    site: str


def ocr_targets(ocr: Document, truth: Document) -> list[OcrTarget]:
    """Per-OCR-position targets derived from :func:`align_documents`.

    ``site`` is the token link kind; for a join the first OCR token carries
    the joined truth and the second is marked ``join_tail``.
    """
    targets: list[OcrTarget | None] = [None] * len(ocr)
    tw = truth.surfaces
    for link in align_documents(ocr, truth):
        if link.kind == "match":
            targets[link.ocr[0]] = OcrTarget(True, tw[link.truth[0]], "match")
        elif link.kind == "substitute":
            targets[link.ocr[0]] = OcrTarget(False, tw[link.truth[0]], "substitute")
        elif link.kind == "split":
            targets[link.ocr[0]] = OcrTarget(False, " ".join(tw[j] for j in link.truth), "split")
        elif link.kind == "join":
            targets[link.ocr[0]] = OcrTarget(False, tw[link.truth[0]], "join")
            targets[link.ocr[1]] = OcrTarget(False, None, "join_tail")
        elif link.kind == "delete":
            targets[link.ocr[0]] = OcrTarget(False, None, "delete")
    return targets
