"""
Gaze predictor training and k-fold cross-validation.

The loss is the mean squared error over every position, [PAD] included:
special tokens carry target 0, so the model learns to emit ~0 there.
"""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np

from config.settings import GAZE_BATCH_SIZE, GAZE_EPOCHS, GAZE_FOLDS, GAZE_LEARNING_RATE
from gaze.corpus import GazeExample
from gaze.model import GazePredictor
from numerics import Adam, Tensor, no_grad
from utils.errors import NumericalError, ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["GazeTrainingResult", "CrossValidationResult", "gaze_loss", "evaluate_gaze", "train_gaze", "cross_validate_gaze"]


@dataclass
class GazeTrainingResult:
    model: GazePredictor
    final_mse: float
    epoch_losses: list[float] = field(default_factory=list)
    steps: int = 0


@dataclass
class CrossValidationResult:
    mean_mse: float
    std_mse: float
    fold_mse: list[float]
    folds: list[np.ndarray]  # held-out example indices per fold


def gaze_loss(model: GazePredictor, batch: Sequence[GazeExample]) -> Tensor:
    """Squared error summed over the batch, divided by its total token count."""
    total = None
    positions = 0
    for example in batch:
        diff = model.forward(example.tokens) - example.targets.astype(model.params.dtype)
        squared = (diff * diff).sum()
        total = squared if total is None else total + squared
        positions += example.tokens.n
    return total * (1.0 / positions)


def evaluate_gaze(model: GazePredictor, examples: Sequence[GazeExample]) -> float:
    """Mean squared error over all positions of all examples."""
    if not examples:
        raise ValidationError("no gaze examples to evaluate")
    squared = 0.0
    positions = 0
    for example in examples:
        with no_grad():
            predicted = model.forward(example.tokens).numpy().astype(np.float64)
        squared += float(((predicted - example.targets) ** 2).sum())
        positions += example.tokens.n
    return squared / positions


def train_gaze(
    examples: Sequence[GazeExample],
    model: GazePredictor,
    epochs: int = GAZE_EPOCHS,
    lr: float = GAZE_LEARNING_RATE,
    batch_size: int = GAZE_BATCH_SIZE,
    seed: int = 0,
) -> GazeTrainingResult:
    """
    Fit the predictor with Adam on shuffled mini-batches.

    Args:
        examples: Standardized gaze examples
        model: Predictor to train in place
        epochs: Passes over the examples; 0 leaves the model untouched
        lr: Adam learning rate
        batch_size: Examples per optimizer step
        seed: Drives the per-epoch shuffle

    Returns:
        GazeTrainingResult with the final training MSE over all examples
    """
    if not examples:
        raise ValidationError("cannot train the gaze model on an empty example set")
    if epochs < 0 or batch_size < 1:
        raise ValidationError(f"epochs must be >= 0 and batch_size >= 1, got {epochs} and {batch_size}")

    rng = np.random.default_rng(seed)
    optimizer = Adam(model.params, lr=lr)
    epoch_losses: list[float] = []
    step = 0

    for epoch in range(1, epochs + 1):
        order = rng.permutation(len(examples))
        running = 0.0
        for start in range(0, len(order), batch_size):
            batch = [examples[i] for i in order[start : start + batch_size]]
            model.params.zero_gradients()
            loss = gaze_loss(model, batch)
            value = loss.item()
            if not np.isfinite(value):
                raise NumericalError(f"gaze loss is not finite ({value}) in epoch {epoch}", step=step)
            loss.backward()
            optimizer.step()
            running += value * len(batch)
            step += 1
            logger.debug(f"gaze step {step}: loss {value:.6f}")
        epoch_losses.append(running / len(examples))
        logger.info(f"Gaze epoch {epoch}/{epochs}: mse {epoch_losses[-1]:.6f}")

    model.params.zero_gradients()
    final = evaluate_gaze(model, examples)
    return GazeTrainingResult(model=model, final_mse=final, epoch_losses=epoch_losses, steps=step)


def cross_validate_gaze(
    examples: Sequence[GazeExample],
    model_factory: Callable[[int], GazePredictor],
    k: int = GAZE_FOLDS,
    epochs: int = GAZE_EPOCHS,
    lr: float = GAZE_LEARNING_RATE,
    batch_size: int = GAZE_BATCH_SIZE,
    seed: int = 0,
    workers: int = 1,
) -> CrossValidationResult:
    """
    Sentence-level k-fold cross-validation.

    Each fold trains a fresh model from model_factory(fold) on the other
    k-1 folds and scores the held-out sentences. Folds are independent, so
    they run in a thread pool when workers > 1.
    """
    if k < 2:
        raise ValidationError(f"cross-validation needs k >= 2, got {k}")
    if len(examples) < k:
        raise ValidationError(f"{len(examples)} examples cannot fill {k} folds")

    order = np.random.default_rng(seed).permutation(len(examples))
    folds = [np.sort(part) for part in np.array_split(order, k)]

    def run_fold(fold: int) -> float:
        held_out = set(folds[fold].tolist())
        train = [ex for i, ex in enumerate(examples) if i not in held_out]
        test = [examples[i] for i in folds[fold]]
        result = train_gaze(train, model_factory(fold), epochs, lr, batch_size, seed + fold)
        mse = evaluate_gaze(result.model, test)
        logger.info(f"Fold {fold + 1}/{k}: train mse {result.final_mse:.6f}, held-out mse {mse:.6f}")
        return mse

    fold_mse = [0.0] * k
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(run_fold, fold): fold for fold in range(k)}
            for future in as_completed(futures):
                fold_mse[futures[future]] = future.result()
    else:
        fold_mse = [run_fold(fold) for fold in range(k)]

    return CrossValidationResult(
        mean_mse=float(np.mean(fold_mse)),
        std_mse=float(np.std(fold_mse)),
        fold_mse=fold_mse,
        folds=folds,
    )
