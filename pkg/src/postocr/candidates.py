"""Correction-candidate generation.

A token expands into (a) every single application of a confusion-matrix
entry at every offset, (b) the join with the following token, validated on
the unigram dictionary, and (c) every two-way split of a long token,
validated on the bigram table. Segment edits that are not dictionary words
are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .alignment import EditInstance
from .confusion import ConfusionMatrix
from .corpus_io import Token
from .language_model import NGramModel

SEGMENT_EDIT = "segment_edit"
SPACE_INSERT = "space_insert"
SPACE_DELETE = "space_delete"
ORIGINAL = "original"

DEFAULT_SPLIT_MIN = 5


@dataclass(frozen=True)
class Candidate:
    surface: str
    kind: str
    edit: EditInstance | None = None
    source_positions: tuple[int, ...] = ()
    confusion_weight: int = 0

    @property
    def parts(self) -> list[str]:
        return self.surface.split(" ")


class Expansion(NamedTuple):
    raw_count: int
    candidates: list[Candidate]


class CandidateGenerator:
    """Candidate generation against a fixed matrix and language model."""

    def __init__(self, matrix: ConfusionMatrix, lm: NGramModel,
                 split_min: int = DEFAULT_SPLIT_MIN, min_weight: int = 1):
        self.matrix = matrix
        self.lm = lm
        self.split_min = split_min
        self.min_weight = min_weight
        self._index: dict[str, list[tuple[str, int]]] = {}
        for src, dst, w in sorted(matrix.entries(min_weight)):
            self._index.setdefault(src, []).append((dst, w))

    def segment_edits(self, surface: str) -> dict[str, tuple[EditInstance, int]]:
        """Every single-entry rewrite of ``surface``, before dictionary filtering.

        Returns surface -> (edit, weight); when several edits give the same
        surface the heaviest one is kept.
        """
        out: dict[str, tuple[EditInstance, int]] = {}
        index = self._index
        n = len(surface)
        for offset in range(n + 1):
            for length in (0, 1, 2):
                if offset + length > n:
                    break
                src = surface[offset:offset + length]
                rules = index.get(src)
                if not rules:
                    continue
                head, tail = surface[:offset], surface[offset + length:]
                for dst, w in rules:
                    cand = head + dst + tail
                    if cand == surface or not cand:
                        continue
                    prev = out.get(cand)
                    if prev is None or w > prev[1]:
                        out[cand] = (EditInstance(src, dst), w)
        return out

    def expand(self, token: Token, next_token: Token | None = None) -> Expansion:
        surface = token.surface
        pos = (token.position,)
        edits = self.segment_edits(surface)
        raw = len(edits)
        found: dict[str, Candidate] = {}
        for cand, (edit, w) in edits.items():
            if self.lm.is_word(cand):
                found[cand] = Candidate(cand, SEGMENT_EDIT, edit, pos, w)

        if next_token is not None:
            raw += 1
            joined = surface + next_token.surface
            if joined not in found and self.lm.is_word(joined):
                found[joined] = Candidate(joined, SPACE_DELETE, None, (token.position, next_token.position))

        if len(surface) > self.split_min:
            for k in range(1, len(surface)):
                raw += 1
                left, right = surface[:k], surface[k:]
                if self.lm.bigram_freq(left, right) > 0:
                    split = f"{left} {right}"
                    found[split] = Candidate(split, SPACE_INSERT, None, pos)

        found.pop(surface, None)
        return Expansion(raw, [found[k] for k in sorted(found)])

    def generate(self, token: Token, next_token: Token | None = None) -> list[Candidate]:
        return self.expand(token, next_token).candidates


def generate(token: Token, next: Token | None, matrix: ConfusionMatrix, lm: NGramModel,
             split_min: int = DEFAULT_SPLIT_MIN) -> list[Candidate]:
    return CandidateGenerator(matrix, lm, split_min).generate(token, next)


def apply_edit(word: str, edit: EditInstance, offset: int) -> str:
    """Corrupt ``word`` by writing ``edit.corruption`` over ``edit.correction`` at ``offset``."""
    if word[offset:offset + len(edit.correction)] != edit.correction:
        raise ValueError(f"{edit.correction!r} not at offset {offset} of {word!r}")
    return word[:offset] + edit.corruption + word[offset + len(edit.correction):]
