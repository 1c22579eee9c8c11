"""Binary logistic regression trained by full-batch gradient descent.

Used twice: as the candidate ranker and as the replace/keep decider. The
model is linear in the raw features. Training runs gradient descent on
column-standardised features for conditioning and maps the solution back
to raw-feature weights, so no scaling step exists at prediction time.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, DataError

logger = logging.getLogger(__name__)

_HEADER = "logistic v1"
_MAX_SCORE = 1.0 - 2.0 ** -53


@dataclass
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 500
    l2: float = 1e-4
    seed: int = 0


@dataclass
class TrainingSet:
    features: np.ndarray
    labels: np.ndarray
    groups: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=float)
        if self.features.ndim != 2 or len(self.features) != len(self.labels):
            raise DataError("features must be a 2-d array with one row per label")
        if not self.groups:
            self.groups = [str(k) for k in range(len(self.labels))]

    @classmethod
    def from_rows(cls, rows: Sequence[tuple[Sequence[float], int, str]], dim: int) -> "TrainingSet":
        if not rows:
            return cls(np.zeros((0, dim)), np.zeros(0), [])
        feats, labels, groups = zip(*rows)
        return cls(np.array(feats, dtype=float), np.array(labels, dtype=float), list(groups))

    def __len__(self) -> int:
        return len(self.labels)

    def subset(self, mask) -> "TrainingSet":
        idx = np.flatnonzero(mask)
        return TrainingSet(self.features[idx], self.labels[idx], [self.groups[k] for k in idx])


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    feature_names: tuple[str, ...]
    final_loss: float | None = None

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.feature_names = tuple(self.feature_names)
        if self.weights.shape != (len(self.feature_names),):
            raise ValueError("one weight per feature name required")
        if not (np.all(np.isfinite(self.weights)) and math.isfinite(self.bias)):
            raise ValueError("non-finite model parameters")

    def margin(self, features) -> np.ndarray | float:
        x = np.asarray(features, dtype=float)
        if x.shape[-1] != len(self.weights):
            raise ValueError(f"expected {len(self.weights)} features, got {x.shape[-1]}")
        return x @ self.weights + self.bias

    def score(self, features):
        return _sigmoid(self.margin(features))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_HEADER + "\n")
            fh.write("\t".join(("feature_names", *self.feature_names)) + "\n")
            for name, w in zip(self.feature_names, self.weights):
                fh.write(f"{name}\t{w:.17g}\n")
            fh.write(f"bias\t{self.bias:.17g}\n")

    @classmethod
    def load(cls, path) -> "LogisticModel":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or lines[0].strip() != _HEADER:
            raise DataError(f"{path}: not a '{_HEADER}' model file")
        try:
            names = lines[1].split("\t")
            if names[0] != "feature_names":
                raise ValueError
            names = names[1:]
            weights = []
            for name, line in zip(names, lines[2:]):
                key, value = line.split("\t")
                if key != name:
                    raise ValueError
                weights.append(float(value))
            key, value = lines[2 + len(names)].split("\t")
            if key != "bias" or len(weights) != len(names):
                raise ValueError
            return cls(np.array(weights), float(value), tuple(names))
        except (ValueError, IndexError):
            raise DataError(f"{path}: malformed model file") from None


def _sigmoid(z):
    out = np.clip(_sigmoid_array(np.asarray(z, dtype=float)), 2.0 ** -1074, _MAX_SCORE)
    return float(out) if out.ndim == 0 else out


def loss_and_grad(weights: np.ndarray, bias: float, X: np.ndarray, y: np.ndarray,
                  l2: float) -> tuple[float, np.ndarray, float]:
    """Mean negative log-likelihood plus ``l2/2 * |w|^2`` and its gradient."""
    z = X @ weights + bias
    # log(1 + e^-z) and log(1 + e^z), overflow-safe
    nll = np.mean(y * np.logaddexp(0.0, -z) + (1.0 - y) * np.logaddexp(0.0, z))
    loss = float(nll + 0.5 * l2 * weights @ weights)
    resid = _sigmoid_array(z) - y
    grad_w = X.T @ resid / len(y) + l2 * weights
    grad_b = float(np.mean(resid))
    return loss, grad_w, grad_b


def _sigmoid_array(z: np.ndarray) -> np.ndarray:
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _check(data: TrainingSet) -> None:
    bad = np.flatnonzero(~np.all(np.isfinite(data.features), axis=1))
    if len(bad):
        raise DataError(f"non-finite features in row {int(bad[0])}")
    labels = set(np.unique(data.labels).tolist())
    if not labels <= {0.0, 1.0}:
        raise DataError(f"labels must be 0/1, got {sorted(labels)}")
    if labels != {0.0, 1.0}:
        raise DataError(f"training data needs both labels, got {len(data)} rows with labels {sorted(labels)}")


def _standardise(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0] = 1.0
    return (X - mean) / scale, mean, scale


def _descend(X: np.ndarray, y: np.ndarray, config: TrainConfig, history: list | None = None):
    w = np.zeros(X.shape[1])
    b = 0.0
    for _ in range(config.epochs):
        loss, gw, gb = loss_and_grad(w, b, X, y, config.l2)
        if history is not None:
            history.append(loss)
        w -= config.learning_rate * gw
        b -= config.learning_rate * gb
    return w, b


def train_logistic(data: TrainingSet, feature_names: Sequence[str],
                   config: TrainConfig | None = None) -> LogisticModel:
    config = config or TrainConfig()
    _check(data)
    if data.features.shape[1] != len(feature_names):
        raise ConfigError(f"{data.features.shape[1]} feature columns for {len(feature_names)} names")
    Xs, mean, scale = _standardise(data.features)
    w, b = _descend(Xs, data.labels, config)
    loss, _, _ = loss_and_grad(w, b, Xs, data.labels, config.l2)
    logger.info("logistic regression: %d rows, %d epochs, final loss %.6f", len(data), config.epochs, loss)
    raw_w = w / scale
    raw_b = b - float(raw_w @ mean)
    return LogisticModel(raw_w, raw_b, tuple(feature_names), final_loss=loss)


def loss_history(data: TrainingSet, config: TrainConfig) -> list[float]:
    """Training loss (standardised space) before every epoch's update."""
    _check(data)
    history: list[float] = []
    _descend(_standardise(data.features)[0], data.labels, config, history)
    return history


def score(model: LogisticModel, features) -> float:
    return model.score(features)


def rank(model: LogisticModel, candidates: Sequence, features: Sequence[Sequence[float]]) -> list[tuple]:
    """Candidates paired with scores, best first; ties broken by surface.

    Ordering uses the linear margin so saturated scores still separate.
    """
    if not candidates:
        return []
    margins = np.atleast_1d(model.margin(np.asarray(features, dtype=float)))
    order = sorted(range(len(candidates)), key=lambda k: (-margins[k], _surface(candidates[k])))
    return [(candidates[k], _sigmoid(margins[k])) for k in order]


def _surface(candidate) -> str:
    return getattr(candidate, "surface", candidate)


def decide(model: LogisticModel, features, threshold: float = 0.5) -> bool:
    """Replace iff the decider's score reaches ``threshold``."""
    return model.score(features) >= threshold


def threshold_curve(model: LogisticModel, data: TrainingSet,
                    thresholds: Sequence[float] | None = None) -> list[dict]:
    """False-positive / false-negative rates of :func:`decide` per threshold."""
    if thresholds is None:
        thresholds = [k / 20 for k in range(1, 20)]
    scores = np.atleast_1d(model.score(data.features))
    pos = data.labels == 1
    neg = ~pos
    rows = []
    for t in thresholds:
        fire = scores >= t
        rows.append({
            "threshold": float(t),
            "false_positive_rate": float(fire[neg].mean()) if neg.any() else 0.0,
            "false_negative_rate": float((~fire[pos]).mean()) if pos.any() else 0.0,
            "replacements": int(fire.sum()),
        })
    return rows


def pick_threshold(curve: Sequence[dict], max_false_positive_rate: float) -> float:
    """Lowest threshold whose false-positive rate stays within the budget."""
    ok = [row["threshold"] for row in curve if row["false_positive_rate"] <= max_false_positive_rate]
    return min(ok) if ok else 1.0


def cross_validate(data: TrainingSet, feature_names: Sequence[str], config: TrainConfig | None = None,
                   k: int = 5) -> list[dict]:
    """Grouped k-fold cross-validation: accuracy and log-loss per fold."""
    config = config or TrainConfig()
    groups = sorted(set(data.groups))
    rng = np.random.default_rng(config.seed)
    order = rng.permutation(len(groups))
    fold_of = {groups[g]: i % k for i, g in enumerate(order)}
    folds = np.array([fold_of[g] for g in data.groups])
    results = []
    for fold in range(k):
        test = folds == fold
        if not test.any() or test.all():
            continue
        model = train_logistic(data.subset(~test), feature_names, config)
        held = data.subset(test)
        p = np.atleast_1d(model.score(held.features))
        eps = 1e-12
        results.append({
            "fold": fold,
            "rows": len(held),
            "accuracy": float(np.mean((p >= 0.5) == (held.labels == 1))),
            "log_loss": float(-np.mean(held.labels * np.log(p + eps) + (1 - held.labels) * np.log(1 - p + eps))),
        })
    return results
