"""Weighted confusion matrix of OCR segment corruptions."""

from __future__ import annotations

import logging
from collections import Counter
from pathlib import Path
from typing import Iterable, Iterator

from .alignment import EditInstance, align_words, extract_edit_instances, pair_documents
from .corpus_io import AlignedCorpus
from .errors import DataError

logger = logging.getLogger(__name__)

EMPTY = "∅"


class ConfusionMatrix:
    """Raw occurrence counts of (corruption, correction) segment pairs.

    The corruption is the OCR-side segment, the correction the ground-truth
    segment; an empty corruption holds insertions, an empty correction
    deletions.
    """

    def __init__(self, counts: dict[tuple[str, str], int] | None = None):
        self._counts: dict[tuple[str, str], int] = {}
        self._by_corruption: dict[str, dict[str, int]] = {}
        for (src, dst), w in sorted((counts or {}).items()):
            if src == dst:
                raise ValueError(f"identity entry {src!r}")
            if w < 1:
                raise ValueError(f"non-positive weight for {src!r}->{dst!r}")
            self._counts[src, dst] = int(w)
            self._by_corruption.setdefault(src, {})[dst] = int(w)

    @classmethod
    def from_instances(cls, instances: Iterable[EditInstance]) -> "ConfusionMatrix":
        counts: Counter = Counter()
        for inst in instances:
            counts[inst.key] += inst.count
        return cls(dict(counts))

    @property
    def counts(self) -> dict[tuple[str, str], int]:
        return dict(self._counts)

    def lookup(self, segment: str) -> set[tuple[str, int]]:
        return set(self._by_corruption.get(segment, {}).items())

    def weight(self, corruption: str, correction: str) -> int:
        return self._counts.get((corruption, correction), 0)

    def probability(self, corruption: str, correction: str) -> float:
        """P(correction | corruption) from the raw counts."""
        row = self._by_corruption.get(corruption)
        if not row:
            return 0.0
        return row.get(correction, 0) / sum(row.values())

    def entries(self, min_weight: int = 1) -> Iterator[tuple[str, str, int]]:
        for (src, dst), w in self._counts.items():
            if w >= min_weight:
                yield src, dst, w

    def total(self) -> int:
        return sum(self._counts.values())

    def merged(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        counts = Counter(self._counts)
        counts.update(other._counts)
        return ConfusionMatrix(dict(counts))

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConfusionMatrix) and self._counts == other._counts

    def __repr__(self) -> str:
        return f"ConfusionMatrix({len(self)} entries, total={self.total()})"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for (src, dst), w in sorted(self._counts.items()):
                fh.write(f"{src or EMPTY}\t{dst or EMPTY}\t{w}\n")

    @classmethod
    def load(cls, path) -> "ConfusionMatrix":
        counts = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line:
                    continue
                fields = line.split("\t")
                try:
                    src, dst, w = fields
                    weight = int(w)
                except ValueError:
                    raise DataError(f"{path}:{lineno}: malformed matrix line {line!r}") from None
                counts["" if src == EMPTY else src, "" if dst == EMPTY else dst] = weight
        try:
            return cls(counts)
        except ValueError as exc:
            raise DataError(f"{path}: {exc}") from None


def corpus_edit_instances(corpus: AlignedCorpus) -> Iterator[EditInstance]:
    """Every qualifying edit instance of the corpus's 1:1 word pairs."""
    for ocr, truth in corpus:
        for token, truth_word in pair_documents(ocr, truth):
            if token.surface != truth_word:
                yield from extract_edit_instances(align_words(token.surface, truth_word))


def train_confusion(corpus: AlignedCorpus) -> ConfusionMatrix:
    if not len(corpus) or not any(len(ocr) and len(truth) for ocr, truth in corpus):
        raise DataError("no training pairs")
    matrix = ConfusionMatrix.from_instances(corpus_edit_instances(corpus))
    logger.info("trained confusion matrix: %d entries, %d instances", len(matrix), matrix.total())
    return matrix


def save_matrix(matrix: ConfusionMatrix, path) -> None:
    matrix.save(Path(path))


def load_matrix(path) -> ConfusionMatrix:
    return ConfusionMatrix.load(Path(path))
