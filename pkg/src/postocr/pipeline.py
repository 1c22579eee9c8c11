"""End-to-end correction and the three training flows."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .alignment import ocr_targets
from .candidates import SPACE_DELETE, Candidate, CandidateGenerator
from .config import Config
from .confusion import ConfusionMatrix, train_confusion
from .corpus_io import AlignedCorpus, Document, apply_decisions
from .errors import ConfigError, DataError
from .features import (
    DECISION_FEATURES,
    RANKER_FEATURES,
    DecisionFeatures,
    decision_features,
    neighbours,
    ranker_features,
    term_frequencies,
)
from .language_model import NGramModel
from .models import LogisticModel, TrainingSet, rank, train_logistic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorrectionDecision:
    position: int
    original: str
    replacement: str | None
    ranker_score: float
    decision_score: float
    candidate_kind: str

    def __post_init__(self):
        if self.replacement is not None and self.replacement == self.original:
            raise ValueError("replacement equals the original word")


class Assessment(NamedTuple):
    """Ranked candidates of one token and the decider's view of the top one."""

    ranked: list[tuple[Candidate, float]]
    features: DecisionFeatures
    decision_score: float

    @property
    def top(self) -> Candidate:
        return self.ranked[0][0]

    @property
    def ranker_score(self) -> float:
        return self.ranked[0][1]


def rank_candidates(candidates: list[Candidate], document: Document, matrix: ConfusionMatrix,
                    lm: NGramModel, ranker: LogisticModel) -> list[tuple[Candidate, float]]:
    feats = [ranker_features(c, *neighbours(document, c), matrix, lm).vector() for c in candidates]
    return rank(ranker, candidates, feats)


class Corrector:
    """Applies trained artifacts to OCR documents."""

    def __init__(self, matrix: ConfusionMatrix, lm: NGramModel, ranker: LogisticModel,
                 decider: LogisticModel, config: Config | None = None):
        if ranker.feature_names != RANKER_FEATURES:
            raise ConfigError(f"ranker features {ranker.feature_names} do not match {RANKER_FEATURES}")
        if decider.feature_names != DECISION_FEATURES:
            raise ConfigError(f"decider features {decider.feature_names} do not match {DECISION_FEATURES}")
        self.config = config or Config()
        self.matrix = matrix
        self.lm = lm
        self.ranker = ranker
        self.decider = decider
        self.generator = CandidateGenerator(matrix, lm, self.config.split_min, self.config.min_weight)

    def assess(self, document: Document, position: int, term_counts: Counter | None = None) -> Assessment | None:
        tokens = document.tokens
        token = tokens[position]
        nxt = tokens[position + 1] if position + 1 < len(tokens) else None
        candidates = self.generator.generate(token, nxt)
        if not candidates:
            return None
        ranked = rank_candidates(candidates, document, self.matrix, self.lm, self.ranker)
        feats = decision_features(token, ranked[0][0], document, self.lm, self.matrix,
                                  self.config.eps, term_counts)
        return Assessment(ranked, feats, self.decider.score(feats.vector()))

    def correct(self, document: Document) -> tuple[Document, list[CorrectionDecision]]:
        term_counts = term_frequencies(document)
        decisions = []
        i = 0
        while i < len(document):
            found = self.assess(document, i, term_counts)
            if found is None:
                i += 1
                continue
            top = found.top
            replace = found.decision_score >= self.config.threshold
            decisions.append(CorrectionDecision(
                i, document.tokens[i].surface, top.surface if replace else None,
                found.ranker_score, found.decision_score, top.kind))
            i += 2 if replace and top.kind == SPACE_DELETE else 1
        return apply_decisions(document, decisions), decisions


def correct_document(doc: Document, matrix: ConfusionMatrix, lm: NGramModel, ranker: LogisticModel,
                     decider: LogisticModel, config: Config | None = None):
    return Corrector(matrix, lm, ranker, decider, config).correct(doc)


def build_ranker_set(corpus: AlignedCorpus, generator: CandidateGenerator) -> TrainingSet:
    """Candidate vectors of erroneous OCR words whose truth is reachable.

    The candidate equal to the ground truth is the single positive row.
    """
    matrix, lm = generator.matrix, generator.lm
    rows = []
    skipped = 0
    for ocr, truth in corpus:
        for pos, target in enumerate(ocr_targets(ocr, truth)):
            if target.correct or target.truth is None:
                continue
            tokens = ocr.tokens
            cands = generator.generate(tokens[pos], tokens[pos + 1] if pos + 1 < len(tokens) else None)
            if target.truth not in {c.surface for c in cands}:
                skipped += 1
                continue
            group = f"{ocr.doc_id}:{pos}"
            for c in cands:
                vec = ranker_features(c, *neighbours(ocr, c), matrix, lm).vector()
                rows.append((vec, int(c.surface == target.truth), group))
    logger.info("ranker set: %d rows, %d unreachable erroneous words skipped", len(rows), skipped)
    return TrainingSet.from_rows(rows, len(RANKER_FEATURES))


def build_decider_set(corpus: AlignedCorpus, generator: CandidateGenerator, ranker: LogisticModel,
                      eps: float) -> TrainingSet:
    """One correction pair per OCR token with candidates.

    Positive iff the OCR word is wrong and the top-ranked candidate equals
    the ground truth.
    """
    matrix, lm = generator.matrix, generator.lm
    rows = []
    for ocr, truth in corpus:
        term_counts = term_frequencies(ocr)
        for pos, target in enumerate(ocr_targets(ocr, truth)):
            tokens = ocr.tokens
            cands = generator.generate(tokens[pos], tokens[pos + 1] if pos + 1 < len(tokens) else None)
            if not cands:
                continue
            top = rank_candidates(cands, ocr, matrix, lm, ranker)[0][0]
            feats = decision_features(tokens[pos], top, ocr, lm, matrix, eps, term_counts)
            label = int(not target.correct and target.truth == top.surface)
            rows.append((feats.vector(), label, f"{ocr.doc_id}:{pos}"))
    logger.info("decider set: %d rows, %d positive", len(rows), sum(r[1] for r in rows))
    return TrainingSet.from_rows(rows, len(DECISION_FEATURES))


def _require_positives(data: TrainingSet, what: str) -> None:
    positives = int(data.labels.sum())
    if positives == 0:
        raise DataError(f"no positive correction pairs for the {what} ({len(data)} rows)")
    if positives == len(data):
        raise DataError(f"no negative rows for the {what} ({len(data)} rows)")


def train_ranker(corpus: AlignedCorpus, matrix: ConfusionMatrix, lm: NGramModel,
                 config: Config | None = None) -> LogisticModel:
    config = config or Config()
    generator = CandidateGenerator(matrix, lm, config.split_min, config.min_weight)
    data = build_ranker_set(corpus, generator)
    _require_positives(data, "ranker")
    return train_logistic(data, RANKER_FEATURES, config.ranker)


def train_decider(corpus: AlignedCorpus, matrix: ConfusionMatrix, lm: NGramModel, ranker: LogisticModel,
                  config: Config | None = None) -> LogisticModel:
    config = config or Config()
    generator = CandidateGenerator(matrix, lm, config.split_min, config.min_weight)
    data = build_decider_set(corpus, generator, ranker, config.eps)
    _require_positives(data, "decider")
    return train_logistic(data, DECISION_FEATURES, config.decider)


class TrainedModels(NamedTuple):
    matrix: ConfusionMatrix
    ranker: LogisticModel
    decider: LogisticModel


def train_all(aligned: AlignedCorpus, lm: NGramModel, config: Config | None = None) -> TrainedModels:
    config = config or Config()
    matrix = train_confusion(aligned)
    ranker = train_ranker(aligned, matrix, lm, config)
    decider = train_decider(aligned, matrix, lm, ranker, config)
    return TrainedModels(matrix, ranker, decider)


def correct_corpus(documents: Iterable[Document], corrector: Corrector):
    """Yield ``(original, corrected, decisions)`` per document."""
    for doc in documents:
        corrected, decisions = corrector.correct(doc)
        yield doc, corrected, decisions
