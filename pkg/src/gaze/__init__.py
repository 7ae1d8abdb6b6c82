"""
Gaze fixation prediction: corpus standardization, predictor and training.
"""

from .corpus import GazeExample, GazeScores, align_subword_labels, min_max_scale, standardize_fixations
from .model import GazeModelConfig, GazePredictor, predict_gaze
from .training import (
    CrossValidationResult,
    GazeTrainingResult,
    cross_validate_gaze,
    evaluate_gaze,
    gaze_loss,
    train_gaze,
)
from .vectors import build_embedding_table, load_word_vectors

__all__ = [
    "GazeExample",
    "GazeScores",
    "min_max_scale",
    "align_subword_labels",
    "standardize_fixations",
    "GazeModelConfig",
    "GazePredictor",
    "predict_gaze",
    "GazeTrainingResult",
    "CrossValidationResult",
    "gaze_loss",
    "evaluate_gaze",
    "train_gaze",
    "cross_validate_gaze",
    "load_word_vectors",
    "build_embedding_table",
]
