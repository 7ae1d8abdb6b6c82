"""
Run configuration for the CLI pipelines.

Priority (highest first):
1. GAZBY_SEED environment variable (seed only)
2. CLI flag overrides
3. key=value config file (parsed with python-dotenv)
4. Defaults below
"""

from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from dotenv import dotenv_values

from config import environment
from config import settings as s
from utils.errors import ConfigError

__all__ = ["RunConfig", "load_run_config", "RANKER_MODES", "DATA_FILES"]

RANKER_MODES = {
    "cross": ("baseline", "first_layer", "all_layers", "last_layer"),
    "bi": ("baseline", "maxsim", "last_layer", "combined", "tfidf"),
}

# Default file names under data_dir
DATA_FILES = {
    "vocab": "vocab.txt",
    "collection": "collection.tsv",
    "queries": "queries.tsv",
    "triples": "triples.train.tsv",
    "dev_triples": "triples.dev.tsv",
    "candidates": "candidates.tsv",
    "qrels": "qrels.txt",
    "gaze_corpus": "gaze.tsv",
    "gaze_checkpoint": "gaze.ckpt",
    "ranker_checkpoint": "ranker.ckpt",
    "run_file": "run.txt",
}

_OPTIONAL_INTS = {"max_steps"}
_TRUE = ("true", "1", "yes", "on")
_FALSE = ("false", "0", "no", "off")


@dataclass(frozen=True)
class RunConfig:
    # ranker
    ranker: str = "cross"
    mode: str = "baseline"
    seed: int = environment.DEFAULT_SEED
    dtype: str = "float32"

    # framing
    max_len: int = s.CROSS_MAX_LEN
    m_q: int = s.QUERY_MAX_LEN
    m_d: int = s.DOC_MAX_LEN
    gaze_pad_length: int = s.GAZE_PAD_LENGTH

    # ranker encoder
    layers: int = s.ENCODER_LAYERS
    heads: int = s.ENCODER_HEADS
    d_model: int = s.ENCODER_D_MODEL
    d_ff: int = s.ENCODER_D_FF
    attn_dropout: float = s.ENCODER_ATTN_DROPOUT
    d_out: int = s.BI_ENCODER_D_OUT
    shared_towers: bool = True
    mask_gaze_weight: float = s.MASK_GAZE_WEIGHT

    # gaze predictor
    gaze_embed_dim: int = s.GAZE_EMBED_DIM
    gaze_lstm_hidden: int = s.GAZE_LSTM_HIDDEN
    gaze_layers: int = s.GAZE_LAYERS
    gaze_heads: int = s.GAZE_HEADS
    gaze_d_ff: int = s.GAZE_D_FF
    gaze_epochs: int = s.GAZE_EPOCHS
    gaze_lr: float = s.GAZE_LEARNING_RATE
    gaze_batch_size: int = s.GAZE_BATCH_SIZE
    folds: int = 0

    # ranker training
    epochs: int = s.RANKER_EPOCHS
    batch_size: int = s.RANKER_BATCH_SIZE
    lr: float = s.RANKER_LEARNING_RATE
    adam_eps: float = s.RANKER_ADAM_EPS
    grad_clip: float = s.RANKER_GRAD_CLIP
    freeze_gaze: bool = False
    max_steps: int | None = None

    # evaluation
    k: int = s.METRIC_CUTOFF
    gain: str = "exp"
    tag: str = "gazby"
    workers: int = environment.CONCURRENT_SCORERS

    # files; empty means data_dir / DATA_FILES[key]
    data_dir: str = environment.DATA_DIR
    vocab: str = ""
    collection: str = ""
    queries: str = ""
    triples: str = ""
    dev_triples: str = ""
    candidates: str = ""
    qrels: str = ""
    gaze_corpus: str = ""
    word_vectors: str = ""
    gaze_checkpoint: str = ""
    ranker_checkpoint: str = ""
    run_file: str = ""

    def __post_init__(self) -> None:
        if self.ranker not in RANKER_MODES:
            raise ConfigError(f"ranker must be one of {sorted(RANKER_MODES)}, got {self.ranker!r}")
        if self.mode not in RANKER_MODES[self.ranker]:
            raise ConfigError(f"mode {self.mode!r} is not a {self.ranker} mode; choose from {RANKER_MODES[self.ranker]}")
        if self.gain not in ("exp", "linear"):
            raise ConfigError(f"gain must be exp or linear, got {self.gain!r}")
        if self.dtype not in ("float32", "float64"):
            raise ConfigError(f"dtype must be float32 or float64, got {self.dtype!r}")
        if self.k < 1 or self.workers < 1:
            raise ConfigError("k and workers must be positive")

    @property
    def numpy_dtype(self):
        return np.dtype(self.dtype)

    def path(self, key: str) -> Path:
        """Configured path for a file key, falling back to data_dir/<default name>."""
        value = getattr(self, key)
        if value:
            return Path(value)
        if key not in DATA_FILES:
            raise ConfigError(f"no path configured for {key}")
        return Path(self.data_dir) / DATA_FILES[key]

    def require(self, *keys: str) -> None:
        """Fail unless every referenced input file exists."""
        missing = [f"{key}={self.path(key)}" for key in keys if not self.path(key).is_file()]
        if missing:
            raise ConfigError(f"missing input files: {', '.join(missing)}")

    def with_overrides(self, **overrides) -> "RunConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)


def _convert(key: str, raw: str, default):
    try:
        if key in _OPTIONAL_INTS:
            return None if raw.strip() in ("", "none") else int(raw)
        if isinstance(default, bool):
            lowered = raw.strip().lower()
            if lowered not in _TRUE + _FALSE:
                raise ValueError(f"not a boolean: {raw!r}")
            return lowered in _TRUE
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw.strip()
    except ValueError as e:
        raise ConfigError(f"bad value for {key}: {e}") from e


def load_run_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """
    Build a RunConfig from an optional key=value file plus overrides.

    Args:
        path: Config file, one key=value per line ('#' comments allowed)
        **overrides: Field values from CLI flags; None means not given

    Raises:
        ConfigError: unknown key, bad value, missing file or invalid combination
    """
    defaults = RunConfig.__dataclass_fields__
    values: dict = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        for key, raw in dotenv_values(path).items():
            if key not in defaults:
                raise ConfigError(f"unknown config key {key!r} in {path}")
            values[key] = _convert(key, raw or "", defaults[key].default)

    unknown = [key for key in overrides if key not in defaults]
    if unknown:
        raise ConfigError(f"unknown overrides: {unknown}")
    values.update({k: v for k, v in overrides.items() if v is not None})

    if environment.seed_overridden():
        values["seed"] = environment.get_seed()

    return RunConfig(**values)
