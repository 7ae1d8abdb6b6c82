"""
Joint training loop for re-rankers over (query, positive, negative) triples.

Gradients reach the encoder, the head and the attached gaze predictor in
one backward pass. Cross-encoders use the pointwise cross-entropy over
both passages of a triple, bi-encoders the pairwise softmax loss.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from config.settings import (
    RANKER_ADAM_EPS,
    RANKER_BATCH_SIZE,
    RANKER_EPOCHS,
    RANKER_GRAD_CLIP,
    RANKER_LEARNING_RATE,
)
from numerics import Adam, Tensor, clip_grad_norm, concat
from ranker.base import BaseRanker
from ranker.losses import pairwise_ce_loss, pointwise_bce_loss
from storage.models import TrainingTriple
from utils.errors import NumericalError, ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["RankerTrainingConfig", "RankerTrainingResult", "triple_loss", "validation_accuracy", "train_ranker"]


@dataclass(frozen=True)
class RankerTrainingConfig:
    epochs: int = RANKER_EPOCHS
    batch_size: int = RANKER_BATCH_SIZE
    lr: float = RANKER_LEARNING_RATE
    adam_eps: float = RANKER_ADAM_EPS
    grad_clip: float = RANKER_GRAD_CLIP
    freeze_gaze: bool = False
    max_steps: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 0 or self.batch_size < 1 or self.lr <= 0:
            raise ValidationError(f"invalid ranker training config: {self}")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValidationError(f"max_steps must be >= 0, got {self.max_steps}")


@dataclass
class RankerTrainingResult:
    model: BaseRanker
    losses: list[float] = field(default_factory=list)  # one entry per optimizer step
    validation: list[float] = field(default_factory=list)  # accuracy after each epoch
    best_epoch: int | None = None
    steps: int = 0


def triple_loss(model: BaseRanker, triple: TrainingTriple) -> Tensor:
    s_pos = model.score_tensor(triple.query, triple.positive)
    s_neg = model.score_tensor(triple.query, triple.negative)
    if model.kind == "cross":
        return pointwise_bce_loss(concat([s_pos.reshape(1), s_neg.reshape(1)]), [1.0, 0.0])
    return pairwise_ce_loss(s_pos, s_neg)


def validation_accuracy(model: BaseRanker, triples: Sequence[TrainingTriple]) -> float:
    """Share of triples whose positive passage outscores the negative."""
    correct = sum(model.score(t.query, t.positive) > model.score(t.query, t.negative) for t in triples)
    return correct / len(triples)


def train_ranker(
    model: BaseRanker,
    triples: Sequence[TrainingTriple],
    config: RankerTrainingConfig | None = None,
    dev_triples: Sequence[TrainingTriple] | None = None,
) -> RankerTrainingResult:
    """
    Train a ranker with Adam, gradient clipping and per-epoch validation.

    Args:
        model: Cross- or bi-encoder, trained in place
        triples: Training triples
        config: Optimizer and schedule settings
        dev_triples: Held-out triples; when given, the epoch with the best
                     validation accuracy is restored at the end

    Returns:
        RankerTrainingResult with the per-step loss curve
    """
    config = config or RankerTrainingConfig()
    if not triples:
        raise ValidationError("cannot train a ranker on an empty triple set")

    trainable = model.trainable_parameters(config.freeze_gaze)
    model.freeze_gaze(config.freeze_gaze)
    optimizer = Adam(trainable, lr=config.lr, eps=config.adam_eps)
    rng = np.random.default_rng(config.seed)
    result = RankerTrainingResult(model=model)
    best_accuracy = -1.0
    best_snapshot = None
    step = 0

    model.train()
    try:
        for epoch in range(1, config.epochs + 1):
            if config.max_steps is not None and step >= config.max_steps:
                break
            order = rng.permutation(len(triples))
            for start in range(0, len(order), config.batch_size):
                if config.max_steps is not None and step >= config.max_steps:
                    break
                batch = [triples[i] for i in order[start : start + config.batch_size]]
                model.zero_gradients()
                batch_loss = 0.0
                for triple in batch:
                    loss = triple_loss(model, triple) * (1.0 / len(batch))
                    value = loss.item()
                    if not np.isfinite(value):
                        raise NumericalError(f"ranker loss is not finite ({value})", step=step)
                    loss.backward()
                    batch_loss += value
                norm = clip_grad_norm(trainable, config.grad_clip)
                optimizer.step()
                step += 1
                result.losses.append(batch_loss)
                logger.debug(f"ranker step {step}: loss {batch_loss:.6f}, grad norm {norm:.4f}")

            if dev_triples:
                model.eval()
                accuracy = validation_accuracy(model, dev_triples)
                model.train()
                result.validation.append(accuracy)
                if accuracy > best_accuracy:
                    best_accuracy, best_snapshot, result.best_epoch = accuracy, model.snapshot(), epoch
                logger.info(f"Epoch {epoch}/{config.epochs}: validation accuracy {accuracy:.3f}")
            else:
                logger.info(f"Epoch {epoch}/{config.epochs}: {step} steps")
    finally:
        model.eval()
        model.zero_gradients()

    if best_snapshot is not None and result.best_epoch != len(result.validation):
        model.restore(best_snapshot)
        logger.info(f"Restored parameters of epoch {result.best_epoch} (validation accuracy {best_accuracy:.3f})")
    result.steps = step
    return result
