"""
Gaze-aware cross-encoder and bi-encoder re-rankers, their scorers, losses and training.
"""

from .base import BaseRanker
from .bi_encoder import BiEncoderModel, BiMode, score_bi
from .cross_encoder import CrossEncoderModel, CrossMode, score_cross
from .idf import IdfTable, smoothed_idf
from .losses import pairwise_ce_loss, pointwise_bce_loss
from .maxsim import gaze_maxsim, idf_maxsim, maxsim
from .training import RankerTrainingConfig, RankerTrainingResult, train_ranker, triple_loss, validation_accuracy

__all__ = [
    "BaseRanker",
    "CrossEncoderModel",
    "CrossMode",
    "score_cross",
    "BiEncoderModel",
    "BiMode",
    "score_bi",
    "IdfTable",
    "smoothed_idf",
    "maxsim",
    "gaze_maxsim",
    "idf_maxsim",
    "pointwise_bce_loss",
    "pairwise_ce_loss",
    "RankerTrainingConfig",
    "RankerTrainingResult",
    "triple_loss",
    "validation_accuracy",
    "train_ranker",
]
