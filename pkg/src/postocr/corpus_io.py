"""Reading and writing OCR output, ground truth and plain-text corpora.

OCR files are UTF-8 TSV with one token per line, ``surface[TAB confidence]``.
The confidence is either a single value or a comma-separated list of
per-character values, which is reduced to its minimum. A blank line ends a
document; a line ``# doc: <id>`` may name the document that follows.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import DataError

_WS = re.compile(r"\s+")
_DOC_HEADER = "# doc:"


@dataclass(frozen=True)
class Token:
    surface: str
    doc_id: str
    position: int
    confidence: float | None = None

    def __post_init__(self):
        if not self.surface or _WS.search(self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")
        if self.position < 0:
            raise ValueError("token position must be non-negative")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence out of range")


@dataclass(frozen=True)
class Document:
    doc_id: str
    tokens: tuple[Token, ...] = field(default_factory=tuple)

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str], doc_id: str = "doc",
                      confidences: Sequence[float | None] | None = None) -> "Document":
        surfaces = list(surfaces)
        confs = list(confidences) if confidences is not None else [None] * len(surfaces)
        return cls(doc_id, tuple(Token(s, doc_id, i, c) for i, (s, c) in enumerate(zip(surfaces, confs))))

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, index: int) -> Token:
        return self.tokens[index]

    def text(self) -> str:
        return " ".join(self.surfaces)


@dataclass(frozen=True)
class AlignedCorpus:
    """(OCR, ground truth) document pairs sharing a doc_id."""

    pairs: tuple[tuple[Document, Document], ...]

    def __post_init__(self):
        for ocr, truth in self.pairs:
            if ocr.doc_id != truth.doc_id:
                raise DataError(f"doc_id mismatch: {ocr.doc_id!r} vs {truth.doc_id!r}")
            if any(t.confidence is not None for t in truth.tokens):
                raise DataError(f"ground truth {truth.doc_id!r} carries confidences")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def ocr_documents(self) -> list[Document]:
        return [ocr for ocr, _ in self.pairs]

    @property
    def truth_documents(self) -> list[Document]:
        return [truth for _, truth in self.pairs]

    def split(self, fraction: float) -> tuple["AlignedCorpus", "AlignedCorpus"]:
        """Split by document order: the first ``fraction`` of tokens go left."""
        total = sum(len(truth) for _, truth in self.pairs)
        seen = 0
        cut = len(self.pairs)
        for k, (_, truth) in enumerate(self.pairs):
            if seen >= fraction * total:
                cut = k
                break
            seen += len(truth)
        return AlignedCorpus(self.pairs[:cut]), AlignedCorpus(self.pairs[cut:])


def tokenize(text: str, doc_id: str = "doc") -> Document:
    return Document.from_surfaces(text.split(), doc_id)


def _parse_confidence(field_text: str, surface: str, where: str) -> float:
    try:
        if "," in field_text:
            values = [float(v) for v in field_text.split(",")]
            if len(values) != len(surface):
                raise DataError(f"{where}: {len(values)} character confidences for {len(surface)} characters")
            value = min(values)
        else:
            value = float(field_text)
    except ValueError:
        raise DataError(f"{where}: unparsable confidence {field_text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise DataError(f"{where}: confidence out of range ({value})")
    return value


def _read_blocks(path: Path) -> Iterator[tuple[str | None, list[tuple[int, str]]]]:
    doc_id = None
    block: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if line.startswith(_DOC_HEADER):
                if block:
                    yield doc_id, block
                    block = []
                doc_id = line[len(_DOC_HEADER):].strip()
            elif not line.strip():
                if block:
                    yield doc_id, block
                    block = []
                doc_id = None
            else:
                block.append((lineno, line))
    if block:
        yield doc_id, block


def load_documents(path, allow_confidence: bool = True) -> list[Document]:
    """Load every document of a token-per-line TSV file."""
    path = Path(path)
    docs = []
    for k, (doc_id, block) in enumerate(_read_blocks(path)):
        doc_id = doc_id or f"{path.stem}-{k}"
        tokens = []
        for lineno, line in block:
            where = f"{path}:{lineno}"
            fields = line.split("\t")
            if len(fields) > 2 or not fields[0] or _WS.search(fields[0]):
                raise DataError(f"{where}: malformed line {line!r}")
            surface = unicodedata.normalize("NFC", fields[0])
            confidence = None
            if len(fields) == 2:
                if not allow_confidence:
                    raise DataError(f"{where}: ground truth line carries a confidence")
                confidence = _parse_confidence(fields[1].strip(), surface, where)
            tokens.append(Token(surface, doc_id, len(tokens), confidence))
        docs.append(Document(doc_id, tuple(tokens)))
    return docs


def load_ocr_document(path) -> Document:
    docs = load_documents(path)
    if len(docs) != 1:
        raise DataError(f"{path}: expected one document, found {len(docs)}")
    return docs[0]


def load_truth_documents(path) -> list[Document]:
    return load_documents(path, allow_confidence=False)


def load_aligned(ocr_path, truth_path) -> AlignedCorpus:
    ocr_docs = load_documents(ocr_path)
    truth_docs = {d.doc_id: d for d in load_truth_documents(truth_path)}
    pairs = []
    for doc in ocr_docs:
        if doc.doc_id not in truth_docs:
            raise DataError(f"no ground truth for document {doc.doc_id!r}")
        pairs.append((doc, truth_docs[doc.doc_id]))
    return AlignedCorpus(tuple(pairs))


def load_text_corpus(path) -> Iterator[Document]:
    """Plain text, one document per non-empty line."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for k, line in enumerate(fh):
            if line.strip():
                yield tokenize(unicodedata.normalize("NFC", line), f"{path.stem}-{k}")


def write_documents(docs: Iterable[Document], path, with_confidence: bool = True) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(f"{_DOC_HEADER} {doc.doc_id}\n")
            for tok in doc.tokens:
                if with_confidence and tok.confidence is not None:
                    fh.write(f"{tok.surface}\t{tok.confidence:.6g}\n")
                else:
                    fh.write(f"{tok.surface}\n")
            fh.write("\n")


def apply_decisions(document: Document, decisions: Iterable) -> Document:
    """Apply accepted replacements; joins consume the following token."""
    accepted = {d.position: d for d in decisions if d.replacement is not None}
    surfaces = []
    i = 0
    tokens = document.tokens
    while i < len(tokens):
        d = accepted.get(i)
        if d is None:
            surfaces.append(tokens[i].surface)
            i += 1
            continue
        surfaces.extend(d.replacement.split())
        i += 2 if d.candidate_kind == "space_delete" else 1
    return Document.from_surfaces(surfaces, document.doc_id)


CHANGE_LOG_COLUMNS = ("doc_id", "position", "original", "replacement", "ranker_score", "decision_score")


def write_corrected_corpus(results: Iterable[tuple[Document, Sequence]], path, log_path=None) -> None:
    """Write corrected text (one line per document) and its change log."""
    path = Path(path)
    log_path = Path(log_path) if log_path else path.with_name(path.name + ".changes.tsv")
    with open(path, "w", encoding="utf-8") as out, open(log_path, "w", encoding="utf-8") as log:
        log.write("\t".join(CHANGE_LOG_COLUMNS) + "\n")
        for document, decisions in results:
            out.write(apply_decisions(document, decisions).text() + "\n")
            for d in sorted(decisions, key=lambda d: d.position):
                if d.replacement is None:
                    continue
                log.write(f"{document.doc_id}\t{d.position}\t{d.original}\t{d.replacement}\t"
                          f"{d.ranker_score:.6g}\t{d.decision_score:.6g}\n")


def write_corrected(document: Document, decisions: Sequence, path, log_path=None) -> None:
    write_corrected_corpus([(document, decisions)], path, log_path)
