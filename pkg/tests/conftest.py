"""Shared fixtures: the running great/greet example and a small trained system."""

from __future__ import annotations

import sys

import pytest

from postocr.confusion import ConfusionMatrix
from postocr.corpora import stdlib_docstrings
from postocr.error_channel import ChannelSpec, corrupt
from postocr.experiment import select_documents
from postocr.language_model import NGramModel, train_lm
from postocr.pipeline import train_all


@pytest.fixture
def great_lm() -> NGramModel:
    unigram = {"the": 20000, "great": 17222, "greet": 3124, "wall": 5000, "of": 19000, "china": 800}
    bigram = {("the", "great"): 1238, ("great", "wall"): 73, ("the", "greet"): 27,
              ("wall", "of"): 40, ("of", "china"): 30}
    return NGramModel(unigram, bigram, doc_count=25000, cutoff=2)


@pytest.fixture
def great_matrix() -> ConfusionMatrix:
    return ConfusionMatrix({("a", "e"): 41, ("aa", "ee"): 5})


@pytest.fixture(scope="session")
def docstring_pool():
    return stdlib_docstrings()


@pytest.fixture(scope="session")
def small_system(docstring_pool):
    """Models trained on ~15k corrupted tokens, with a held-out test part."""
    clean = select_documents(docstring_pool, 15_000, stride=5)
    result = corrupt(clean, ChannelSpec(word_error_rate=0.25), seed=11)
    train, test = result.corpus.split(0.8)
    lm = train_lm(docstring_pool)
    models = train_all(train, lm)
    return {"lm": lm, "models": models, "train": train, "test": test, "corrupted": result}


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module and module.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in module.VERDICTS:
            terminalreporter.write_line(line)
