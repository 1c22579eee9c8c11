"""Statistical post-OCR correction: confusion-matrix candidates ranked and
accepted by two logistic-regression models."""

from .alignment import Alignment, EditInstance, EditOp, align_documents, align_words, extract_edit_instances
from .candidates import Candidate, CandidateGenerator, generate
from .config import Config, config_from_dict, load_config
from .confusion import ConfusionMatrix, train_confusion
from .corpus_io import AlignedCorpus, Document, Token, load_aligned, load_documents
from .error_channel import ChannelSpec, corrupt
from .errors import ConfigError, DataError, PostOCRError
from .evaluation import EvalReport, ceiling_analysis, wer
from .kernels import BACKEND
from .language_model import NGramModel, train_lm
from .models import LogisticModel, TrainConfig, rank, score, train_logistic
from .pipeline import CorrectionDecision, Corrector, correct_document, train_all

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AlignedCorpus", "Alignment", "Candidate", "CandidateGenerator", "ChannelSpec", "Config",
    "ConfigError", "ConfusionMatrix", "CorrectionDecision", "Corrector", "DataError", "Document",
    "EditInstance", "EditOp", "EvalReport", "LogisticModel", "NGramModel", "PostOCRError", "Token",
    "TrainConfig", "align_documents", "align_words", "ceiling_analysis", "config_from_dict",
    "correct_document", "corrupt", "extract_edit_instances", "generate", "load_aligned", "load_config",
    "load_documents", "rank", "score", "train_all", "train_confusion", "train_lm", "train_logistic", "wer",
]
