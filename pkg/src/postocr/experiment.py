"""Closed-loop experiment: corrupt clean text, train on one part, score the rest."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .config import Config
from .corpora import stdlib_docstrings
from .corpus_io import Document
from .error_channel import ChannelSpec, corrupt
from .evaluation import EvalReport, ceiling_analysis
from .language_model import NGramModel, train_lm
from .pipeline import TrainedModels, train_all

logger = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    report: EvalReport
    models: TrainedModels
    lm: NGramModel
    train_tokens: int
    test_tokens: int
    seconds: float


def select_documents(docs: list[Document], tokens: int, stride: int = 3) -> list[Document]:
    """Every ``stride``-th document until ``tokens`` words are collected."""
    chosen, total = [], 0
    for doc in docs[::stride]:
        if total >= tokens:
            break
        chosen.append(doc)
        total += len(doc)
    return chosen


def closed_loop(tokens: int = 60_000, word_error_rate: float = 0.25, train_fraction: float = 0.8,
                seed: int = 0, config: Config | None = None, lm_docs: list[Document] | None = None,
                clean_docs: list[Document] | None = None) -> ExperimentResult:
    """Run the full train/evaluate loop on synthetically corrupted text.

    The language model sees the whole clean pool (``lm_docs``, by default
    every stdlib docstring), so the test vocabulary is covered.
    """
    start = time.perf_counter()
    config = config or Config()
    pool = lm_docs if lm_docs is not None else stdlib_docstrings()
    clean = clean_docs if clean_docs is not None else select_documents(pool, tokens)
    spec = ChannelSpec.from_dict({**config.channel, "word_error_rate": word_error_rate})
    corrupted = corrupt(clean, spec, seed=seed)
    train, test = corrupted.corpus.split(train_fraction)
    lm = train_lm(pool, config.cutoff)
    models = train_all(train, lm, config)
    report = ceiling_analysis(test, models.matrix, lm, models.ranker, models.decider, config)
    seconds = time.perf_counter() - start
    logger.info("closed loop finished in %.1fs", seconds)
    return ExperimentResult(report, models, lm, sum(len(t) for _, t in train), sum(len(t) for _, t in test), seconds)
