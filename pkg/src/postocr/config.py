"""Run configuration, loadable from a YAML or JSON file.

Recognised sections and keys (all optional)::

    seed: 0
    language_model: {cutoff: 2}
    candidates: {split_min: 5, min_weight: 1}
    features: {eps: 1.0}
    ranker: {learning_rate: 0.1, epochs: 500, l2: 1.0e-4}
    decider: {learning_rate: 0.1, epochs: 500, l2: 1.0e-4, threshold: 0.5}
    channel: {word_error_rate: 0.25, mix: {...}, multi_error: false, table_seed: 0}
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from .errors import ConfigError
from .models import TrainConfig


@dataclass
class Config:
    seed: int = 0
    cutoff: int = 2
    split_min: int = 5
    min_weight: int = 1
    eps: float = 1.0
    threshold: float = 0.5
    ranker: TrainConfig = field(default_factory=TrainConfig)
    decider: TrainConfig = field(default_factory=TrainConfig)
    channel: dict = field(default_factory=dict)

    def validate(self) -> "Config":
        if self.cutoff < 0 or self.split_min < 1 or self.min_weight < 1:
            raise ConfigError("cutoff must be >= 0, split_min and min_weight >= 1")
        if self.eps <= 0:
            raise ConfigError("eps must be positive")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError("threshold must lie in [0, 1]")
        for name in ("ranker", "decider"):
            tc = getattr(self, name)
            if tc.learning_rate <= 0 or tc.epochs < 1 or tc.l2 < 0:
                raise ConfigError(f"invalid {name} training settings")
        return self


_SECTIONS = {
    "language_model": {"cutoff": "cutoff"},
    "candidates": {"split_min": "split_min", "min_weight": "min_weight"},
    "features": {"eps": "eps"},
}
_TRAIN_KEYS = {f.name for f in fields(TrainConfig)}


def config_from_dict(raw: dict | None) -> Config:
    raw = dict(raw or {})
    cfg = Config()
    try:
        if "seed" in raw:
            cfg.seed = int(raw.pop("seed"))
        for section, keys in _SECTIONS.items():
            values = dict(raw.pop(section, None) or {})
            for key, attr in keys.items():
                if key in values:
                    setattr(cfg, attr, type(getattr(cfg, attr))(values.pop(key)))
            if values:
                raise ConfigError(f"unknown keys in [{section}]: {sorted(values)}")
        for name in ("ranker", "decider"):
            values = dict(raw.pop(name, None) or {})
            if name == "decider" and "threshold" in values:
                cfg.threshold = float(values.pop("threshold"))
            unknown = set(values) - _TRAIN_KEYS
            if unknown:
                raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
            values.setdefault("seed", cfg.seed)
            setattr(cfg, name, replace(TrainConfig(), **values))
        cfg.channel = dict(raw.pop("channel", None) or {})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad configuration value: {exc}") from None
    if raw:
        raise ConfigError(f"unknown configuration sections: {sorted(raw)}")
    return cfg.validate()


def load_config(path) -> Config:
    if path is None:
        return Config()
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if raw is not None and not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return config_from_dict(raw)
