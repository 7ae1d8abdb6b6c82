"""
Ranking losses.

Pointwise: binary cross-entropy on relevance probabilities (cross-encoder).
Pairwise:  softmax cross-entropy over (positive, negative) raw scores (bi-encoder).
"""

import numpy as np

from config.settings import SCORE_CLAMP
from numerics import Tensor, as_tensor, clamp, concat, log_softmax_rows
from utils.errors import NumericalError, ShapeError, ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["pointwise_bce_loss", "pairwise_ce_loss"]


def pointwise_bce_loss(scores, labels) -> Tensor:
    """
    -sum_{k in R+} log S_k - sum_{k in R-} log(1 - S_k)

    Scores at exactly 0 or 1 are clamped to [1e-7, 1 - 1e-7].
    """
    scores = as_tensor(scores).reshape(-1)
    labels = np.asarray(labels, dtype=scores.dtype).reshape(-1)
    if labels.shape != scores.shape:
        raise ShapeError(f"{labels.size} labels for {scores.size} scores")
    if not np.isin(labels, (0.0, 1.0)).all():
        raise ValidationError("relevance labels must be 0 or 1")
    if not np.isfinite(scores.data).all():
        raise NumericalError("relevance scores are not finite")

    if (scores.data < SCORE_CLAMP).any() or (scores.data > 1.0 - SCORE_CLAMP).any():
        logger.warning(f"Clamping {scores.size} relevance scores into [{SCORE_CLAMP}, {1 - SCORE_CLAMP}]")
    safe = clamp(scores, SCORE_CLAMP, 1.0 - SCORE_CLAMP)
    positive = (safe.log() * labels).sum()
    negative = ((1.0 - safe).log() * (1.0 - labels)).sum()
    return -(positive + negative)


def pairwise_ce_loss(s_pos, s_neg) -> Tensor:
    """-log softmax([s_pos, s_neg])[0], summed over pairs."""
    s_pos, s_neg = as_tensor(s_pos).reshape(-1, 1), as_tensor(s_neg).reshape(-1, 1)
    if s_pos.shape != s_neg.shape:
        raise ShapeError(f"{s_pos.shape[0]} positive scores for {s_neg.shape[0]} negatives")
    if not (np.isfinite(s_pos.data).all() and np.isfinite(s_neg.data).all()):
        raise NumericalError("pairwise scores are not finite")
    log_probs = log_softmax_rows(concat([s_pos, s_neg], axis=1))
    return -log_probs[:, 0].sum()
