"""Unigram and bigram document-frequency tables.

The unigram table doubles as the dictionary. Frequencies count documents,
not occurrences.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .corpus_io import Document
from .errors import DataError

logger = logging.getLogger(__name__)

DEFAULT_BIGRAM_CUTOFF = 2


@dataclass(frozen=True)
class NGramModel:
    unigram: dict[str, int]
    bigram: dict[tuple[str, str], int]
    doc_count: int
    cutoff: int = DEFAULT_BIGRAM_CUTOFF

    def is_word(self, w: str) -> bool:
        return self.unigram.get(w, 0) >= 1

    def unigram_freq(self, w: str) -> int:
        return self.unigram.get(w, 0)

    def bigram_freq(self, w1: str | None, w2: str | None) -> int:
        if w1 is None or w2 is None:
            return 0
        return self.bigram.get((w1, w2), 0)

    def save(self, directory) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        header = f"# doc_count={self.doc_count} cutoff={self.cutoff}\n"
        with open(directory / "unigrams.tsv", "w", encoding="utf-8") as fh:
            fh.write(header)
            for w, f in sorted(self.unigram.items()):
                fh.write(f"{w}\t{f}\n")
        with open(directory / "bigrams.tsv", "w", encoding="utf-8") as fh:
            fh.write(header)
            for (w1, w2), f in sorted(self.bigram.items()):
                fh.write(f"{w1}\t{w2}\t{f}\n")

    @classmethod
    def load(cls, directory) -> "NGramModel":
        directory = Path(directory)
        meta = None
        tables = []
        for name, width in (("unigrams.tsv", 2), ("bigrams.tsv", 3)):
            path = directory / name
            table = {}
            with open(path, encoding="utf-8") as fh:
                header = fh.readline()
                try:
                    fields = dict(kv.split("=") for kv in header.lstrip("#").split())
                    meta = int(fields["doc_count"]), int(fields["cutoff"])
                except (ValueError, KeyError):
                    raise DataError(f"{path}: bad header {header.strip()!r}") from None
                for lineno, line in enumerate(fh, 2):
                    parts = line.rstrip("\r\n").split("\t")
                    if len(parts) != width:
                        raise DataError(f"{path}:{lineno}: malformed line")
                    try:
                        freq = int(parts[-1])
                    except ValueError:
                        raise DataError(f"{path}:{lineno}: bad frequency") from None
                    table[parts[0] if width == 2 else (parts[0], parts[1])] = freq
            tables.append(table)
        return cls(tables[0], tables[1], meta[0], meta[1])


def train_lm(corpus: Iterable[Document], cutoff: int = DEFAULT_BIGRAM_CUTOFF) -> NGramModel:
    """Document frequencies over ``corpus``; bigrams below ``cutoff`` are dropped."""
    unigram: Counter = Counter()
    bigram: Counter = Counter()
    doc_count = 0
    for doc in corpus:
        doc_count += 1
        words = doc.surfaces
        unigram.update(set(words))
        bigram.update(set(zip(words, words[1:])))
    if doc_count == 0:
        raise DataError("empty language-model corpus")
    kept = {bg: f for bg, f in bigram.items() if f >= cutoff}
    logger.info("language model: %d docs, %d unigrams, %d/%d bigrams kept (cutoff %d)",
                doc_count, len(unigram), len(kept), len(bigram), cutoff)
    return NGramModel(dict(unigram), kept, doc_count, cutoff)


def is_word(model: NGramModel, w: str) -> bool:
    return model.is_word(w)


def unigram_freq(model: NGramModel, w: str) -> int:
    return model.unigram_freq(w)


def bigram_freq(model: NGramModel, w1: str | None, w2: str | None) -> int:
    return model.bigram_freq(w1, w2)
