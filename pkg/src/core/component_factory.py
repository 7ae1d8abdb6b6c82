"""
Component factory for creating gaze predictors and rankers from configuration.

Separates model construction and checkpoint rebuilding from orchestration logic.
"""

import importlib
from pathlib import Path

import numpy as np

from config.ranker_configs import uses_gaze, variant_for
from config.run_config import RANKER_MODES, RunConfig
from encoder import EncoderConfig
from gaze import GazeModelConfig, GazePredictor, build_embedding_table, load_word_vectors
from ranker import BaseRanker, IdfTable
from storage.checkpoint import load_checkpoint, read_manifest
from tokenizer import Vocabulary
from utils.errors import CheckpointError, ConfigError, ValidationError
from utils.structured_logger import get_logger

_ENCODER_PREFIX = "encoder."
_GAZE_PREFIX = "gaze."


def _strip(echo: dict[str, str], prefix: str) -> dict[str, str]:
    return {key[len(prefix) :]: value for key, value in echo.items() if key.startswith(prefix)}


class ComponentFactory:
    """Factory for creating gaze predictors and rankers from a RunConfig."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = get_logger(__name__)

    # -----helper functions----

    # Both separated to allow importing without instantiation
    # (e.g. for testing)

    @staticmethod
    def import_class(class_path: str):
        if "." not in class_path:
            raise ImportError(f"Invalid class path: {class_path}. Expected format: 'module.class'")
        module_path, class_name = class_path.rsplit(".", 1)
        try:
            module = importlib.import_module(module_path)
            return getattr(module, class_name)
        except (ImportError, AttributeError) as e:
            raise ImportError(f"Failed to import {class_path}: {e}") from e

    @staticmethod
    def create_component(class_path: str, *args, **kwargs):
        """
        Create component from the full class path defined in ranker_configs.py

        Args:
            class_path: Full module path
            *args: Positional arguments for the constructor
            **kwargs: Keyword arguments for the constructor

        Returns:
            Component instance
        """
        component_class = ComponentFactory.import_class(class_path)
        return component_class(*args, **kwargs)

    # ---- configs ----

    def encoder_config(self, vocab: Vocabulary) -> EncoderConfig:
        c = self.config
        return EncoderConfig(
            vocab_size=len(vocab),
            layers=c.layers,
            heads=c.heads,
            d_model=c.d_model,
            d_ff=c.d_ff,
            max_len=c.max_len,
            attn_dropout=c.attn_dropout,
        )

    def gaze_config(self, vocab: Vocabulary) -> GazeModelConfig:
        c = self.config
        return GazeModelConfig(
            vocab_size=len(vocab),
            embed_dim=c.gaze_embed_dim,
            lstm_hidden=c.gaze_lstm_hidden,
            layers=c.gaze_layers,
            heads=c.gaze_heads,
            d_ff=c.gaze_d_ff,
        )

    # ---- gaze predictor ----

    def create_gaze_model(self, vocab: Vocabulary, seed: int | None = None) -> GazePredictor:
        """Fresh predictor; embeddings start from word_vectors when configured."""
        seed = self.config.seed if seed is None else seed
        gaze_config = self.gaze_config(vocab)
        embeddings = None
        if self.config.word_vectors:
            vectors = load_word_vectors(self.config.word_vectors, gaze_config.embed_dim)
            rng = np.random.default_rng(seed)
            embeddings = build_embedding_table(
                vocab, vectors, gaze_config.embed_dim, rng, dtype=self.config.numpy_dtype
            )
        return GazePredictor(gaze_config, seed=seed, dtype=self.config.numpy_dtype, embeddings=embeddings)

    def load_gaze_model(self, vocab: Vocabulary, path: str | Path | None = None) -> GazePredictor:
        """Rebuild a predictor from the configuration stored in its checkpoint."""
        path = Path(path) if path is not None else self.config.path("gaze_checkpoint")
        manifest = read_manifest(path)
        if manifest.echo.get("kind") != "gaze":
            raise CheckpointError(f"{path.name} is not a gaze checkpoint (kind {manifest.echo.get('kind')})")
        gaze_config = GazeModelConfig.from_dict(_strip(manifest.echo, _GAZE_PREFIX))
        if gaze_config.vocab_size != len(vocab):
            raise CheckpointError(f"{path.name} expects {gaze_config.vocab_size} tokens, vocabulary has {len(vocab)}")
        model = GazePredictor(gaze_config, seed=self.config.seed, dtype=self.config.numpy_dtype)
        load_checkpoint(model, path)
        return model

    # ---- rankers ----

    def create_ranker(
        self,
        vocab: Vocabulary,
        ranker: str | None = None,
        mode: str | None = None,
        gaze: GazePredictor | None = None,
        idf: IdfTable | None = None,
        encoder_config: EncoderConfig | None = None,
    ) -> BaseRanker:
        """Instantiate the registered variant for (ranker, mode)."""
        c = self.config
        ranker = ranker or c.ranker
        mode = mode or c.mode
        variant = variant_for(ranker, mode)
        if uses_gaze(mode) and gaze is None:
            raise ValidationError(f"variant {variant['name']} needs a gaze predictor")

        kwargs = {
            "gaze": gaze,
            "mode": mode,
            "seed": c.seed,
            "dtype": c.numpy_dtype,
            **variant.get("model_kwargs", {}),
        }
        if ranker == "bi":
            kwargs.update(
                d_out=c.d_out,
                m_q=c.m_q,
                m_d=c.m_d,
                shared_towers=c.shared_towers,
                idf=idf,
                mask_gaze_weight=c.mask_gaze_weight,
            )
        model = self.create_component(
            variant["model_class"], vocab, encoder_config or self.encoder_config(vocab), **kwargs
        )
        self.logger.info(f"Created {variant['name']} with {model.parameter_count():,} parameters")
        return model

    def load_ranker(
        self,
        vocab: Vocabulary,
        path: str | Path | None = None,
        mode: str | None = None,
        gaze: GazePredictor | None = None,
        idf: IdfTable | None = None,
    ) -> BaseRanker:
        """
        Rebuild a ranker from its checkpoint's config echo and load its weights.

        Gaze weights stored inside the ranker checkpoint win; otherwise the
        given predictor is attached after loading.
        """
        c = self.config
        path = Path(path) if path is not None else c.path("ranker_checkpoint")
        echo = read_manifest(path).echo
        ranker = echo.get("kind")
        if ranker not in ("cross", "bi"):
            raise CheckpointError(f"{path.name} is not a ranker checkpoint (kind {ranker})")

        encoder_config = EncoderConfig.from_dict(_strip(echo, _ENCODER_PREFIX))
        if encoder_config.vocab_size != len(vocab):
            raise CheckpointError(f"{path.name} expects {encoder_config.vocab_size} tokens, vocabulary has {len(vocab)}")

        stored_gaze = _strip(echo, _GAZE_PREFIX)
        own_gaze = (
            GazePredictor(GazeModelConfig.from_dict(stored_gaze), seed=c.seed, dtype=c.numpy_dtype)
            if stored_gaze
            else None
        )
        mode = mode or c.mode
        if mode not in RANKER_MODES[ranker]:
            raise ConfigError(f"{path.name} holds a {ranker} ranker, which cannot score in mode {mode}")
        if ranker == "bi":
            c = c.with_overrides(
                d_out=int(echo["d_out"]),
                m_q=int(echo["m_q"]),
                m_d=int(echo["m_d"]),
                shared_towers=echo["shared_towers"] == "True",
            )
        # Build in baseline mode so a missing predictor is only required for gaze modes
        builder = ComponentFactory(c)
        model = builder.create_ranker(vocab, ranker, "baseline", own_gaze, idf, encoder_config)
        load_checkpoint(model, path)

        if own_gaze is None and gaze is not None:
            if gaze.params.dtype != model.params.dtype:
                raise ValidationError(f"gaze dtype {gaze.params.dtype} differs from ranker dtype {model.params.dtype}")
            model.gaze = gaze
        model.mode = type(model.mode)(mode)
        if uses_gaze(mode) and model.gaze is None:
            raise ValidationError(f"mode {mode} needs a gaze predictor; pass a gaze checkpoint")
        return model
