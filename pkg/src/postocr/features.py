"""Ranker and decision feature vectors.

Ranker features are raw counts. Decision features compare the top
candidate with the OCR word through smoothed frequency ratios
``(freq(candidate) + eps) / (freq(ocr word) + eps)``, so values above 1
favour replacement. No scaling is applied to either vector.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

from .candidates import Candidate
from .confusion import ConfusionMatrix
from .corpus_io import Document, Token
from .language_model import NGramModel

DEFAULT_EPS = 1.0


@dataclass(frozen=True)
class RankerFeatures:
    confusion_weight: int
    unigram_freq: int
    backward_bigram: int
    forward_bigram: int

    def vector(self) -> list[float]:
        return [float(v) for v in astuple(self)]


@dataclass(frozen=True)
class DecisionFeatures:
    inv_prop_unigram: float
    inv_prop_backward_bigram: float
    inv_prop_forward_bigram: float
    inv_prop_term_freq: float
    ocr_confidence: float
    confusion_weight: int

    def vector(self) -> list[float]:
        return [float(v) for v in astuple(self)]


RANKER_FEATURES = tuple(f.name for f in fields(RankerFeatures))
DECISION_FEATURES = tuple(f.name for f in fields(DecisionFeatures))


def neighbours(document: Document, candidate: Candidate) -> tuple[str | None, str | None]:
    """OCR words immediately outside the span the candidate replaces."""
    first = candidate.source_positions[0]
    last = candidate.source_positions[-1]
    prev = document.tokens[first - 1].surface if first > 0 else None
    nxt = document.tokens[last + 1].surface if last + 1 < len(document) else None
    return prev, nxt


def _confusion_weight(candidate: Candidate, matrix: ConfusionMatrix) -> int:
    if candidate.edit is None:
        return 0
    return matrix.weight(candidate.edit.corruption, candidate.edit.correction)


def _candidate_freqs(candidate: Candidate, prev, nxt, lm: NGramModel) -> tuple[int, int, int]:
    parts = candidate.parts
    return (min(lm.unigram_freq(p) for p in parts),
            lm.bigram_freq(prev, parts[0]),
            lm.bigram_freq(parts[-1], nxt))


def ranker_features(candidate: Candidate, prev: str | None, next: str | None,
                    matrix: ConfusionMatrix, lm: NGramModel) -> RankerFeatures:
    uni, back, fwd = _candidate_freqs(candidate, prev, next, lm)
    return RankerFeatures(_confusion_weight(candidate, matrix), uni, back, fwd)


def term_frequencies(document: Document) -> Counter:
    return Counter(document.surfaces)


def decision_features(ocr: Token, top: Candidate, document: Document, lm: NGramModel,
                      matrix: ConfusionMatrix, eps: float = DEFAULT_EPS,
                      term_counts: Counter | None = None) -> DecisionFeatures:
    if term_counts is None:
        term_counts = term_frequencies(document)
    pos = ocr.position
    prev = document.tokens[pos - 1].surface if pos > 0 else None
    ocr_next = document.tokens[pos + 1].surface if pos + 1 < len(document) else None
    cand_prev, cand_next = neighbours(document, top)

    cand_uni, cand_back, cand_fwd = _candidate_freqs(top, cand_prev, cand_next, lm)
    cand_tf = min(term_counts.get(p, 0) for p in top.parts)
    word = ocr.surface

    def ratio(cand_freq, ocr_freq):
        return (cand_freq + eps) / (ocr_freq + eps)

    return DecisionFeatures(
        ratio(cand_uni, lm.unigram_freq(word)),
        ratio(cand_back, lm.bigram_freq(prev, word)),
        ratio(cand_fwd, lm.bigram_freq(word, ocr_next)),
        ratio(cand_tf, term_counts.get(word, 0)),
        1.0 if ocr.confidence is None else ocr.confidence,
        _confusion_weight(top, matrix),
    )


def write_feature_dump(rows: Iterable[tuple[str, str, Sequence[float]]], names: Sequence[str], path) -> None:
    """TSV with one row per (token, candidate) and every feature column."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(("token", "candidate", *names)) + "\n")
        for token, cand, vec in rows:
            fh.write("\t".join((token, cand, *(f"{v:.6g}" for v in vec))) + "\n")

