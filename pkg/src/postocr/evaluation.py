"""Metrics and per-stage ceiling analysis.

Word status (correct, erroneous, segmentation site) comes from the token
alignment, not from position matching, so split/join errors are scored
at the right place.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .alignment import alignment_cost, ocr_targets
from .candidates import CandidateGenerator
from .config import Config
from .confusion import ConfusionMatrix
from .corpus_io import AlignedCorpus, Document
from .errors import DataError
from .features import term_frequencies
from .kernels import edit_distance
from .language_model import NGramModel
from .models import LogisticModel, threshold_curve
from .pipeline import Corrector, build_decider_set

MAX_K = 10


def word_edits(hypothesis: Document, reference: Document) -> int:
    return edit_distance(hypothesis.surfaces, reference.surfaces)


def wer(hypothesis: Document, reference: Document) -> float:
    if len(reference) == 0:
        raise DataError("empty reference document")
    return word_edits(hypothesis, reference) / len(reference)


def corpus_wer(pairs: Iterable[tuple[Document, Document]]) -> float:
    """Total word edits over total reference length."""
    edits = length = 0
    for hyp, ref in pairs:
        edits += word_edits(hyp, ref)
        length += len(ref)
    if length == 0:
        raise DataError("empty reference corpus")
    return edits / length


@dataclass
class EvalReport:
    wer_before: float = 0.0
    wer_after: float = 0.0
    relative_reduction: float = 0.0
    error_class_share: float = 0.0
    retrieval_recall: float = 0.0
    recall_at_k: dict[int, float] = field(default_factory=dict)
    recall_at_k_all: dict[int, float] = field(default_factory=dict)
    decision_matrix: dict[str, float] = field(default_factory=dict)
    candidate_count_stats: dict[str, object] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def false_positive_rate(self) -> float:
        return self.decision_matrix.get("reject|correct", 0.0)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        dm = self.decision_matrix
        lines = [
            f"WER before            {self.wer_before:.4f}",
            f"WER after             {self.wer_after:.4f}",
            f"relative reduction    {self.relative_reduction:.4f}",
            f"error-class share     {self.error_class_share:.4f}",
            f"retrieval recall      {self.retrieval_recall:.4f}",
            "recall@k (retrievable / all erroneous):",
        ]
        for k in sorted(self.recall_at_k):
            lines.append(f"  k={k:<3d} {self.recall_at_k[k]:.4f}  {self.recall_at_k_all.get(k, 0.0):.4f}")
        lines += [
            "decision matrix          OCR correct  OCR incorrect",
            f"  reject OCR word        {dm.get('reject|correct', 0):.4f}       {dm.get('reject|incorrect', 0):.4f}",
            f"  accept OCR word        {dm.get('accept|correct', 0):.4f}       {dm.get('accept|incorrect', 0):.4f}",
            "candidates per token: " + ", ".join(f"{k}={v}" for k, v in self.candidate_count_stats.items()
                                                 if not isinstance(v, dict)),
            "counts: " + ", ".join(f"{k}={v}" for k, v in sorted(self.counts.items())),
        ]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        """Write the text report to ``path`` and the JSON twin next to it."""
        path = Path(path)
        path.write_text(self.to_text(), encoding="utf-8")
        path.with_suffix(".json").write_text(self.to_json() + "\n", encoding="utf-8")


def _rate(num: int, den: int) -> float:
    return num / den if den else 0.0


def ceiling_analysis(test: AlignedCorpus, matrix: ConfusionMatrix, lm: NGramModel, ranker: LogisticModel,
                     decider: LogisticModel, config: Config | None = None) -> EvalReport:
    config = config or Config()
    corrector = Corrector(matrix, lm, ranker, decider, config)
    gen: CandidateGenerator = corrector.generator

    erroneous = in_class = retrieved = 0
    truth_ranks: list[int] = []
    dm = Counter()
    raw_counts: list[int] = []
    kept_counts: list[int] = []
    before: list[tuple[Document, Document]] = []
    after: list[tuple[Document, Document]] = []

    for ocr, truth in test:
        term_counts = term_frequencies(ocr)
        tokens = ocr.tokens
        for pos, target in enumerate(ocr_targets(ocr, truth)):
            nxt = tokens[pos + 1] if pos + 1 < len(tokens) else None
            expansion = gen.expand(tokens[pos], nxt)
            raw_counts.append(expansion.raw_count)
            kept_counts.append(len(expansion.candidates))
            found = corrector.assess(ocr, pos, term_counts) if expansion.candidates else None
            replace = found is not None and found.decision_score >= config.threshold

            if target.correct:
                if found is not None:
                    dm["reject|correct" if replace else "accept|correct"] += 1
                continue
            if target.site == "join_tail":
                continue
            erroneous += 1
            if target.site in ("split", "join") or (
                    target.site == "substitute" and alignment_cost(tokens[pos].surface, target.truth) == 1):
                in_class += 1
            if target.truth is None or found is None:
                continue
            surfaces = [c.surface for c, _ in found.ranked]
            if target.truth not in surfaces:
                continue
            retrieved += 1
            rank = surfaces.index(target.truth) + 1
            truth_ranks.append(rank)
            if rank == 1:
                dm["reject|incorrect" if replace else "accept|incorrect"] += 1

        corrected, _ = corrector.correct(ocr)
        before.append((ocr, truth))
        after.append((corrected, truth))

    report = EvalReport()
    report.wer_before = corpus_wer(before)
    report.wer_after = corpus_wer(after)
    report.relative_reduction = _rate(report.wer_before - report.wer_after, report.wer_before)
    report.error_class_share = _rate(in_class, erroneous)
    report.retrieval_recall = _rate(retrieved, erroneous)
    for k in range(1, MAX_K + 1):
        hits = sum(1 for r in truth_ranks if r <= k)
        report.recall_at_k[k] = _rate(hits, len(truth_ranks))
        report.recall_at_k_all[k] = _rate(hits, erroneous)
    n_correct = dm["reject|correct"] + dm["accept|correct"]
    n_incorrect = dm["reject|incorrect"] + dm["accept|incorrect"]
    report.decision_matrix = {
        "reject|correct": _rate(dm["reject|correct"], n_correct),
        "accept|correct": _rate(dm["accept|correct"], n_correct) if n_correct else 1.0,
        "reject|incorrect": _rate(dm["reject|incorrect"], n_incorrect),
        "accept|incorrect": _rate(dm["accept|incorrect"], n_incorrect) if n_incorrect else 1.0,
    }
    report.candidate_count_stats = _count_stats(raw_counts, kept_counts)
    report.counts = {
        "tokens": len(raw_counts),
        "erroneous": erroneous,
        "in_class": in_class,
        "retrieved": retrieved,
        "decisions_on_correct": n_correct,
        "decisions_on_incorrect": n_incorrect,
    }
    return report


def _count_stats(raw: Sequence[int], kept: Sequence[int]) -> dict:
    def histogram(values):
        edges = (0, 1, 2, 5, 10, 20, 50, 100, 200, 500)
        hist = Counter()
        for v in values:
            label = next((f"<{e}" for e in edges[1:] if v < e), f">={edges[-1]}")
            hist[label] += 1
        return dict(hist)

    n = len(raw) or 1
    return {
        "mean_raw": round(sum(raw) / n, 3),
        "max_raw": max(raw, default=0),
        "mean_kept": round(sum(kept) / n, 3),
        "max_kept": max(kept, default=0),
        "histogram_raw": histogram(raw),
        "histogram_kept": histogram(kept),
    }


def plot_data_recall_curve(report: EvalReport) -> list[tuple[int, float]]:
    return [(k, report.recall_at_k[k]) for k in sorted(report.recall_at_k)]


def write_recall_curve(report: EvalReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k\trecall\n")
        for k, r in plot_data_recall_curve(report):
            fh.write(f"{k}\t{r:.6f}\n")


def tune_threshold(heldout: AlignedCorpus, matrix: ConfusionMatrix, lm: NGramModel, ranker: LogisticModel,
                   decider: LogisticModel, config: Config | None = None,
                   thresholds: Sequence[float] | None = None) -> list[dict]:
    """False-positive / false-negative trade-off of the decider on held-out data."""
    config = config or Config()
    gen = CandidateGenerator(matrix, lm, config.split_min, config.min_weight)
    data = build_decider_set(heldout, gen, ranker, config.eps)
    return threshold_curve(decider, data, thresholds)
