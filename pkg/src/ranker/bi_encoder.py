"""
Bi-encoder re-ranker: query and document are encoded separately, projected
to d_out, L2-normalized and compared token by token with MaxSim.

Modes:
- BASELINE:   plain MaxSim
- MAXSIM:     gaze-weighted MaxSim
- LAST_LAYER: gaze-modulated attention in the last layer of both towers, plain MaxSim
- COMBINED:   gaze-modulated towers and gaze-weighted MaxSim
- TFIDF:      idf-weighted MaxSim
"""

from dataclasses import replace
from enum import Enum

import numpy as np

from config.settings import BI_ENCODER_D_OUT, DOC_MAX_LEN, MASK_GAZE_WEIGHT, QUERY_MAX_LEN
from encoder import EncoderConfig, EncoderStack, GazeMode
from gaze.model import GazePredictor
from numerics import Tensor, l2_normalize_rows, no_grad
from numerics.parameters import uniform_weight
from ranker.base import BaseRanker
from ranker.idf import IdfTable
from ranker.maxsim import gaze_maxsim, idf_maxsim, maxsim
from tokenizer import Role, TokenKind, TokenSequence, Vocabulary, frame_bi, wordpiece_tokenize
from utils.errors import ValidationError

__all__ = ["BiMode", "BiEncoderModel", "score_bi"]

_SKIPPED_QUERY_KINDS = frozenset({TokenKind.CLS, TokenKind.SEP, TokenKind.PAD})


class BiMode(Enum):
    BASELINE = "baseline"
    MAXSIM = "maxsim"
    LAST_LAYER = "last_layer"
    COMBINED = "combined"
    TFIDF = "tfidf"


_USES_GAZE = frozenset({BiMode.MAXSIM, BiMode.LAST_LAYER, BiMode.COMBINED})
_GAZE_TOWERS = frozenset({BiMode.LAST_LAYER, BiMode.COMBINED})
_GAZE_MAXSIM = frozenset({BiMode.MAXSIM, BiMode.COMBINED})


class BiEncoderModel(BaseRanker):
    """Late-interaction scorer over separately encoded query and passage, with optional gaze weighting."""

    kind = "bi"

    def __init__(
        self,
        vocab: Vocabulary,
        encoder_config: EncoderConfig,
        gaze: GazePredictor | None = None,
        mode: BiMode | str = BiMode.BASELINE,
        d_out: int = BI_ENCODER_D_OUT,
        m_q: int = QUERY_MAX_LEN,
        m_d: int = DOC_MAX_LEN,
        shared_towers: bool = True,
        idf: IdfTable | None = None,
        mask_gaze_weight: float = MASK_GAZE_WEIGHT,
        seed: int = 0,
        dtype=np.float64,
    ):
        super().__init__(vocab, gaze, dtype, seed)
        if d_out < 1:
            raise ValidationError(f"d_out must be positive, got {d_out}")
        self.mode = BiMode(mode)
        self.m_q, self.m_d = m_q, m_d
        self.d_out = d_out
        self.shared_towers = shared_towers
        self.idf = idf
        self.mask_gaze_weight = mask_gaze_weight
        if encoder_config.max_len < max(m_q, m_d):
            encoder_config = replace(encoder_config, max_len=max(m_q, m_d))
        self.encoder_config = encoder_config

        rng = np.random.default_rng(seed)
        self.query_encoder = EncoderStack(encoder_config, self.params, "query_encoder", rng)
        self.doc_encoder = (
            self.query_encoder if shared_towers else EncoderStack(encoder_config, self.params, "doc_encoder", rng)
        )
        d = encoder_config.d_model
        self.projection = self.params.add("projection.weight", uniform_weight(rng, (d, d_out), d, self.dtype))
        self.logger.debug(f"Bi-encoder ({self.mode.value}) with {self.parameter_count():,} parameters")

    def encoder_stacks(self) -> list[EncoderStack]:
        return [self.query_encoder] if self.shared_towers else [self.query_encoder, self.doc_encoder]

    # ---- framing ----

    def frame_query(self, query: str) -> TokenSequence:
        return frame_bi(self.tokenize(query, "query"), Role.QUERY, self.vocab, self.m_q, self.m_d)

    def frame_document(self, document: str) -> TokenSequence:
        """Document framing without trailing [PAD]; masked [PAD] keys change nothing in the encoder."""
        framed = frame_bi(wordpiece_tokenize(document, self.vocab), Role.DOCUMENT, self.vocab, self.m_q, self.m_d)
        return framed.trimmed()

    # ---- towers ----

    def query_gaze(self, tokens: TokenSequence, override=None) -> Tensor:
        """Query gaze with [MASK] augmentation positions pinned to mask_gaze_weight."""
        g = self.gaze_vector(tokens, override)
        is_mask = np.array([k is TokenKind.MASK for k in tokens.kinds])
        if not is_mask.any():
            return g
        keep = (~is_mask).astype(self.dtype)
        return g * keep + is_mask.astype(self.dtype) * self.mask_gaze_weight

    def embed(self, stack: EncoderStack, tokens: TokenSequence, gaze: Tensor | None = None) -> Tensor:
        """n x d_out unit-length token embeddings; gaze, when given, modulates the last layer."""
        mode = GazeMode.LAST_LAYER if gaze is not None else GazeMode.NONE
        return l2_normalize_rows(stack.encode(tokens, gaze, mode) @ self.projection)

    def forward(
        self,
        q_tokens: TokenSequence,
        d_tokens: TokenSequence,
        mode: BiMode | str | None = None,
        gaze_q=None,
        gaze_d=None,
    ) -> Tensor:
        """
        Relevance score for framed query and document.

        Args:
            q_tokens: Output of frame_query()
            d_tokens: Output of frame_document()
            mode: Overrides the model's configured mode
            gaze_q: Optional query gaze override (scalar or per-token array)
            gaze_d: Optional document gaze override

        Returns:
            Unbounded scalar score tensor
        """
        mode = BiMode(mode) if mode is not None else self.mode
        gq = gd = None
        if mode in _USES_GAZE:
            gq = self.query_gaze(q_tokens, gaze_q)
            gd = self.gaze_vector(d_tokens, gaze_d)

        towers_use_gaze = mode in _GAZE_TOWERS
        Eq = self.embed(self.query_encoder, q_tokens, gq if towers_use_gaze else None)
        Ed = self.embed(self.doc_encoder, d_tokens, gd if towers_use_gaze else None)

        q_rows = np.flatnonzero([k not in _SKIPPED_QUERY_KINDS for k in q_tokens.kinds])
        d_rows = np.flatnonzero(~d_tokens.pad_mask())
        Eq, Ed = Eq[q_rows], Ed[d_rows]

        if mode in _GAZE_MAXSIM:
            return gaze_maxsim(Eq, Ed, gq[q_rows], gd[d_rows])
        if mode is BiMode.TFIDF:
            if self.idf is None:
                raise ValidationError("TFIDF mode needs an idf table; build one over the collection first")
            return idf_maxsim(Eq, Ed, [q_tokens.pieces[i] for i in q_rows], self.idf)
        return maxsim(Eq, Ed)

    def score_tensor(self, query: str, document: str) -> Tensor:
        return self.forward(self.frame_query(query), self.frame_document(document))

    def config_echo(self) -> dict[str, str]:
        echo = {
            "kind": self.kind,
            "d_out": str(self.d_out),
            "m_q": str(self.m_q),
            "m_d": str(self.m_d),
            "shared_towers": str(self.shared_towers),
        }
        echo.update({f"encoder.{k}": str(v) for k, v in self.encoder_config.to_dict().items()})
        if self.gaze is not None:
            echo.update({f"gaze.{k}": str(v) for k, v in self.gaze.config.to_dict().items()})
        return echo


def score_bi(
    q: str,
    d: str,
    model: BiEncoderModel,
    mode: BiMode | str | None = None,
    gaze_q=None,
    gaze_d=None,
) -> float:
    """Relevance score of d for q under the given mode (the model's own mode when None)."""
    with no_grad():
        return model.forward(model.frame_query(q), model.frame_document(d), mode, gaze_q, gaze_d).item()
