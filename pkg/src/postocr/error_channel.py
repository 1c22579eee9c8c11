"""Synthetic OCR error channel.

Corrupts clean text word by word to produce aligned (OCR, truth) corpora.
Each corrupted word receives one error of a kind drawn from the mix; the
segment rewrites come from a confusion table, either given or sampled
from the corpus alphabet with Zipf-like weights.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .corpus_io import AlignedCorpus, Document, Token
from .errors import ConfigError

KINDS = ("substitution", "deletion", "insertion", "merge_split", "pair_2_2", "spacing")

# substitution 50%, deletion/insertion 30%, 2:1 and 1:2 10%, spacing 10%
DEFAULT_MIX = {
    "substitution": 0.5,
    "deletion": 0.15,
    "insertion": 0.15,
    "merge_split": 0.1,
    "pair_2_2": 0.0,
    "spacing": 0.1,
}


class Rewrite(NamedTuple):
    truth: str
    ocr: str
    weight: float


@dataclass
class ChannelTable:
    """Segment rewrites per error kind (truth segment -> OCR segment)."""

    rules: dict[str, list[Rewrite]]

    def __post_init__(self):
        for kind, rules in self.rules.items():
            if kind not in KINDS or kind == "spacing":
                raise ConfigError(f"no rewrite table for error kind {kind!r}")
            for r in rules:
                if r.truth == r.ocr or r.weight <= 0:
                    raise ConfigError(f"bad rewrite {r}")

    def pairs(self) -> set[tuple[str, str]]:
        """(corruption, correction) pairs the table can inject."""
        return {(r.ocr, r.truth) for rules in self.rules.values() for r in rules}


def _zipf(n: int, exponent: float = 1.1) -> list[float]:
    return [1.0 / (k ** exponent) for k in range(1, n + 1)]


def _other(rng: random.Random, alphabet: list[str], avoid: set[str]) -> str:
    pool = [c for c in alphabet if c not in avoid]
    return rng.choice(pool)


def random_table(corpus: Iterable[Document], seed: int = 0, per_char: int = 2,
                 n_bigrams: int = 20, exponent: float = 1.1) -> ChannelTable:
    """Sample a rewrite table over the corpus alphabet.

    Every rewrite is canonical: no character of an OCR segment coincides
    with the truth character at the same slot, so each injected error is
    the unique cheapest explanation of itself.
    """
    chars: Counter = Counter()
    bigrams: Counter = Counter()
    for doc in corpus:
        for w in doc.surfaces:
            chars.update(w)
            bigrams.update(w[k:k + 2] for k in range(len(w) - 1))
    if len(chars) < 3:
        raise ConfigError("corpus alphabet too small for a random channel table")
    rng = random.Random(seed)
    alphabet = sorted(chars, key=lambda c: (-chars[c], c))
    top_bigrams = [b for b, _ in sorted(bigrams.items(), key=lambda kv: (-kv[1], kv[0]))[:n_bigrams]]

    def weighted(pairs):
        pairs = list(pairs)
        rng.shuffle(pairs)
        return [Rewrite(t, o, w) for (t, o), w in zip(pairs, _zipf(len(pairs), exponent))]

    subs = []
    for c in alphabet:
        pool = [x for x in alphabet if x != c]
        for x in rng.sample(pool, min(per_char, len(pool))):
            subs.append((c, x))
    merges = [(c, _other(rng, alphabet, {c}) + _other(rng, alphabet, {c})) for c in alphabet]
    merges += [(b, _other(rng, alphabet, set(b))) for b in top_bigrams]
    pairs = [(b, _other(rng, alphabet, {b[0]}) + _other(rng, alphabet, {b[1]})) for b in top_bigrams]
    return ChannelTable({
        "substitution": weighted(subs),
        "deletion": weighted((c, "") for c in alphabet),
        "insertion": weighted(("", c) for c in alphabet),
        "merge_split": weighted(merges),
        "pair_2_2": weighted(pairs),
    })


@dataclass
class ChannelSpec:
    word_error_rate: float = 0.25
    mix: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_MIX))
    table: ChannelTable | None = None
    table_seed: int = 0
    multi_error: bool = False
    confidence: bool = True
    max_retries: int = 10

    def __post_init__(self):
        if not 0.0 <= self.word_error_rate <= 1.0:
            raise ConfigError("word_error_rate must lie in [0, 1]")
        unknown = set(self.mix) - set(KINDS)
        if unknown:
            raise ConfigError(f"unknown error kinds {sorted(unknown)}")
        if any(v < 0 for v in self.mix.values()) or not math.isclose(sum(self.mix.values()), 1.0, abs_tol=1e-9):
            raise ConfigError("error-kind mix must be non-negative and sum to 1")

    @classmethod
    def from_dict(cls, raw: dict) -> "ChannelSpec":
        raw = dict(raw)
        if "mix" in raw:
            mix = {k: 0.0 for k in KINDS}
            mix.update({k: float(v) for k, v in raw["mix"].items()})
            raw["mix"] = mix
        if "table" in raw:
            raw["table"] = ChannelTable({k: [Rewrite(*r) for r in v] for k, v in raw["table"].items()})
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ConfigError(f"bad channel section: {exc}") from None


class ErrorLabel(NamedTuple):
    doc_id: str
    position: int
    truth: str
    ocr: str
    kind: str
    corruption: str
    correction: str


class Corrupted(NamedTuple):
    corpus: AlignedCorpus
    labels: list[ErrorLabel]
    table: ChannelTable


def _segment_options(word: str, rules: list[Rewrite]) -> list[tuple[int, Rewrite]]:
    options = []
    for r in rules:
        size = len(r.truth)
        if size == 0:
            options.extend((k, r) for k in range(len(word) + 1))
            continue
        start = word.find(r.truth)
        while start != -1:
            options.append((start, r))
            start = word.find(r.truth, start + 1)
    return options


def _apply_segment(rng: random.Random, word: str, rules: list[Rewrite]):
    options = [(k, r) for k, r in _segment_options(word, rules)
               if len(word) - len(r.truth) + len(r.ocr) > 0]
    if not options:
        return None
    k, r = rng.choices(options, weights=[r.weight for _, r in options])[0]
    return word[:k] + r.ocr + word[k + len(r.truth):], r.ocr, r.truth


def _corrupt_word(rng, word, kind, table, has_next):
    """Returns (ocr surfaces, corruption, correction, joins_next) or None."""
    if kind == "spacing":
        options = []
        if has_next:
            options.append("join")
        if len(word) >= 2:
            options.append("split")
        if not options:
            return None
        if rng.choice(options) == "join":
            return None, "", " ", True
        cut = rng.randint(1, len(word) - 1)
        return [word[:cut], word[cut:]], " ", "", False
    rules = table.rules.get(kind) or []
    done = _apply_segment(rng, word, rules)
    if done is None:
        return None
    return [done[0]], done[1], done[2], False


def corrupt(corpus: Iterable[Document], spec: ChannelSpec | None = None, seed: int = 0) -> Corrupted:
    """Corrupt clean documents into an aligned (OCR, truth) corpus."""
    spec = spec or ChannelSpec()
    docs = list(corpus)
    table = spec.table or random_table(docs, spec.table_seed)
    rng = random.Random(seed)
    kinds = [k for k in KINDS if spec.mix.get(k, 0) > 0]
    weights = [spec.mix[k] for k in kinds]
    pairs = []
    labels = []
    for doc in docs:
        words = doc.surfaces
        out: list[tuple[str, float | None]] = []
        i = 0
        while i < len(words):
            word = words[i]
            result = None
            if kinds and rng.random() < spec.word_error_rate:
                for _ in range(spec.max_retries):
                    kind = rng.choices(kinds, weights)[0]
                    result = _corrupt_word(rng, word, kind, table, i + 1 < len(words))
                    if result is not None:
                        break
            if result is None:
                out.append((word, _confidence(rng, spec, False)))
                i += 1
                continue
            surfaces, corruption, correction, joins = result
            if joins:
                surfaces = [word + words[i + 1]]
            elif spec.multi_error and kind != "spacing":
                second = _apply_segment(rng, surfaces[0], table.rules.get("substitution") or [])
                if second is not None:
                    surfaces = [second[0]]
            ocr_text = " ".join(surfaces)
            labels.append(ErrorLabel(doc.doc_id, i, word if not joins else f"{word} {words[i + 1]}",
                                     ocr_text, kind, corruption, correction))
            out.extend((s, _confidence(rng, spec, True)) for s in surfaces)
            i += 2 if joins else 1
        ocr_doc = Document.from_surfaces([s for s, _ in out], doc.doc_id, [c for _, c in out])
        pairs.append((ocr_doc, Document(doc.doc_id, tuple(Token(t.surface, doc.doc_id, t.position)
                                                          for t in doc.tokens))))
    return Corrupted(AlignedCorpus(tuple(pairs)), labels, table)


def _confidence(rng: random.Random, spec: ChannelSpec, corrupted: bool) -> float | None:
    # overlapping ranges: confidence hints at errors without revealing them
    if not spec.confidence:
        return None
    return round(rng.uniform(0.3, 0.9) if corrupted else rng.uniform(0.6, 1.0), 3)


def write_labels(labels: Iterable[ErrorLabel], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(ErrorLabel._fields) + "\n")
        for lab in labels:
            fh.write("\t".join(str(v) for v in lab) + "\n")
