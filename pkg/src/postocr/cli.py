"""Command-line interface.

Exit codes: 0 success, 1 data error, 2 configuration or usage error.

A model directory holds ``matrix.tsv``, ``ranker.model``, ``decider.model``
and the language model under ``lm/``.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from .config import Config, load_config
from .confusion import ConfusionMatrix, train_confusion
from .corpora import stdlib_docstrings
from .corpus_io import (
    Document,
    load_aligned,
    load_documents,
    load_text_corpus,
    write_corrected_corpus,
    write_documents,
)
from .error_channel import ChannelSpec, corrupt, write_labels
from .errors import ConfigError, DataError
from .evaluation import ceiling_analysis, tune_threshold, write_recall_curve
from .experiment import select_documents
from .language_model import NGramModel, train_lm
from .models import LogisticModel, pick_threshold
from .pipeline import Corrector, correct_corpus, train_all, train_decider, train_ranker

logger = logging.getLogger("postocr")

MATRIX_FILE = "matrix.tsv"
RANKER_FILE = "ranker.model"
DECIDER_FILE = "decider.model"
LM_DIR = "lm"


def _config(ctx: click.Context) -> Config:
    return ctx.obj["config"]


def _read_clean(path: str | None, use_stdlib: bool) -> list[Document]:
    if use_stdlib:
        return stdlib_docstrings()
    if path is None:
        raise ConfigError("give --corpus or --stdlib-docstrings")
    if path.endswith(".tsv"):
        return load_documents(path, allow_confidence=False)
    return list(load_text_corpus(path))


def _models_dir(models: str, lm: str | None):
    root = Path(models)
    matrix = ConfusionMatrix.load(root / MATRIX_FILE)
    ranker = LogisticModel.load(root / RANKER_FILE)
    decider = LogisticModel.load(root / DECIDER_FILE)
    language = NGramModel.load(Path(lm) if lm else root / LM_DIR)
    return matrix, language, ranker, decider


def _aligned(f):
    f = click.option("--truth", "truth_path", required=True, help="Ground-truth token TSV.")(f)
    return click.option("--ocr", "ocr_path", required=True, help="OCR token TSV.")(f)


@click.group()
@click.option("--config", "config_path", default=None, help="YAML or JSON configuration file.")
@click.option("-v", "--verbose", count=True, help="More logging (repeatable).")
@click.pass_context
def cli(ctx: click.Context, config_path: str | None, verbose: int) -> None:
    """Statistical post-OCR correction."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"config": load_config(config_path)}


@cli.command("train-lm")
@click.option("--corpus", default=None, help="Plain text (one document per line) or token TSV.")
@click.option("--stdlib-docstrings", "use_stdlib", is_flag=True, help="Use stdlib docstrings as the corpus.")
@click.option("--out", required=True, help="Output directory.")
@click.pass_context
def train_lm_cmd(ctx, corpus, use_stdlib, out):
    """Count unigram and bigram document frequencies."""
    docs = _read_clean(corpus, use_stdlib)
    model = train_lm(docs, _config(ctx).cutoff)
    model.save(out)
    click.echo(f"{len(model.unigram)} unigrams, {len(model.bigram)} bigrams over {model.doc_count} documents")


@cli.command("train-channel")
@_aligned
@click.option("--out", required=True, help="Confusion matrix TSV.")
def train_channel_cmd(ocr_path, truth_path, out):
    """Learn the confusion matrix from aligned word pairs."""
    matrix = train_confusion(load_aligned(ocr_path, truth_path))
    matrix.save(out)
    click.echo(f"{len(matrix)} confusion entries, {matrix.total()} edit instances")


@cli.command("train-ranker")
@_aligned
@click.option("--matrix", required=True)
@click.option("--lm", required=True, help="Language model directory.")
@click.option("--out", required=True)
@click.pass_context
def train_ranker_cmd(ctx, ocr_path, truth_path, matrix, lm, out):
    """Fit the candidate ranker."""
    model = train_ranker(load_aligned(ocr_path, truth_path), ConfusionMatrix.load(matrix),
                         NGramModel.load(lm), _config(ctx))
    model.save(out)
    click.echo(f"ranker final loss {model.final_loss:.6f}")


@cli.command("train-decider")
@_aligned
@click.option("--matrix", required=True)
@click.option("--lm", required=True, help="Language model directory.")
@click.option("--ranker", required=True)
@click.option("--out", required=True)
@click.pass_context
def train_decider_cmd(ctx, ocr_path, truth_path, matrix, lm, ranker, out):
    """Fit the replace/keep decider."""
    model = train_decider(load_aligned(ocr_path, truth_path), ConfusionMatrix.load(matrix),
                          NGramModel.load(lm), LogisticModel.load(ranker), _config(ctx))
    model.save(out)
    click.echo(f"decider final loss {model.final_loss:.6f}")


@cli.command("train-all")
@_aligned
@click.option("--lm", required=True, help="Language model directory (copied into the model directory).")
@click.option("--out", required=True, help="Model directory.")
@click.pass_context
def train_all_cmd(ctx, ocr_path, truth_path, lm, out):
    """Train confusion matrix, ranker and decider in one go."""
    language = NGramModel.load(lm)
    trained = train_all(load_aligned(ocr_path, truth_path), language, _config(ctx))
    root = Path(out)
    root.mkdir(parents=True, exist_ok=True)
    trained.matrix.save(root / MATRIX_FILE)
    trained.ranker.save(root / RANKER_FILE)
    trained.decider.save(root / DECIDER_FILE)
    language.save(root / LM_DIR)
    click.echo(f"models written to {root}")


@cli.command("correct")
@click.option("--input", "input_path", required=True, help="OCR token TSV.")
@click.option("--models", required=True, help="Model directory.")
@click.option("--lm", default=None, help="Language model directory (default: <models>/lm).")
@click.option("--out", required=True, help="Corrected text, one line per document.")
@click.option("--log", "log_path", default=None, help="Change log TSV (default: <out>.changes.tsv).")
@click.pass_context
def correct_cmd(ctx, input_path, models, lm, out, log_path):
    """Correct OCR documents."""
    matrix, language, ranker, decider = _models_dir(models, lm)
    corrector = Corrector(matrix, language, ranker, decider, _config(ctx))
    results = [(doc, decisions) for doc, _, decisions in correct_corpus(load_documents(input_path), corrector)]
    write_corrected_corpus(results, out, log_path)
    changed = sum(1 for _, ds in results for d in ds if d.replacement is not None)
    click.echo(f"{changed} replacements in {len(results)} documents")


@cli.command("evaluate")
@_aligned
@click.option("--models", required=True, help="Model directory.")
@click.option("--lm", default=None, help="Language model directory (default: <models>/lm).")
@click.option("--report", "report_path", default=None, help="Write text report here and JSON next to it.")
@click.option("--curve", "curve_path", default=None, help="Write the recall@k curve as TSV.")
@click.pass_context
def evaluate_cmd(ctx, ocr_path, truth_path, models, lm, report_path, curve_path):
    """Per-stage ceiling analysis and WER on an aligned test set."""
    matrix, language, ranker, decider = _models_dir(models, lm)
    report = ceiling_analysis(load_aligned(ocr_path, truth_path), matrix, language, ranker, decider,
                              _config(ctx))
    if report_path:
        report.save(report_path)
    if curve_path:
        write_recall_curve(report, curve_path)
    click.echo(report.to_text(), nl=False)


@cli.command("corrupt")
@click.option("--corpus", default=None, help="Plain text (one document per line) or token TSV.")
@click.option("--stdlib-docstrings", "use_stdlib", is_flag=True, help="Use stdlib docstrings as clean text.")
@click.option("--max-tokens", type=int, default=None, help="Stop after this many clean tokens.")
@click.option("--wer", type=float, default=None, help="Word error rate (overrides the config).")
@click.option("--seed", type=int, default=None)
@click.option("--ocr-out", required=True)
@click.option("--truth-out", required=True)
@click.option("--labels-out", default=None, help="Per-error label TSV.")
@click.pass_context
def corrupt_cmd(ctx, corpus, use_stdlib, max_tokens, wer, seed, ocr_out, truth_out, labels_out):
    """Produce a synthetic aligned OCR corpus from clean text."""
    cfg = _config(ctx)
    docs = _read_clean(corpus, use_stdlib)
    if max_tokens is not None:
        docs = select_documents(docs, max_tokens, stride=1)
    raw = dict(cfg.channel)
    if wer is not None:
        raw["word_error_rate"] = wer
    result = corrupt(docs, ChannelSpec.from_dict(raw), seed=cfg.seed if seed is None else seed)
    write_documents(result.corpus.ocr_documents, ocr_out)
    write_documents(result.corpus.truth_documents, truth_out, with_confidence=False)
    if labels_out:
        write_labels(result.labels, labels_out)
    click.echo(f"{len(result.labels)} errors injected into {sum(len(d) for d in docs)} tokens")


@cli.command("tune-threshold")
@_aligned
@click.option("--models", required=True, help="Model directory.")
@click.option("--lm", default=None, help="Language model directory (default: <models>/lm).")
@click.option("--max-fpr", type=float, default=0.05, show_default=True,
              help="Largest acceptable false-positive rate.")
@click.pass_context
def tune_threshold_cmd(ctx, ocr_path, truth_path, models, lm, max_fpr):
    """Sweep the decision threshold on held-out data."""
    if not 0.0 <= max_fpr <= 1.0:
        raise ConfigError("--max-fpr must lie in [0, 1]")
    matrix, language, ranker, decider = _models_dir(models, lm)
    curve = tune_threshold(load_aligned(ocr_path, truth_path), matrix, language, ranker, decider, _config(ctx))
    click.echo("threshold\tfalse_positive_rate\tfalse_negative_rate\treplacements")
    for row in curve:
        click.echo(f"{row['threshold']:.2f}\t{row['false_positive_rate']:.4f}\t"
                   f"{row['false_negative_rate']:.4f}\t{row['replacements']}")
    click.echo(f"chosen threshold: {pick_threshold(curve, max_fpr):.2f}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="postocr", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 2
    except ConfigError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        return 2
    except (DataError, OSError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
