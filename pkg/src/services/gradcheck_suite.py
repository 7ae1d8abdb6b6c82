"""
Finite-difference checks over every differentiable path of the pipeline.

Each check builds a tiny float64 model, a scalar loss closure and the
leaves to perturb, then compares backward() against central differences.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from encoder import EncoderConfig, EncoderLayerParams, attention
from gaze import GazeModelConfig, GazePredictor, gaze_loss, standardize_fixations
from numerics import ParameterSet, Tensor, finite_difference_check
from ranker import BiEncoderModel, CrossEncoderModel, gaze_maxsim, pairwise_ce_loss, pointwise_bce_loss, triple_loss
from storage.models import GazeRecord, TrainingTriple
from tokenizer import SPECIAL_TOKENS, Vocabulary
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["GradcheckResult", "GRADCHECK_TOLERANCE", "END_TO_END_TOLERANCE", "run_gradcheck_suite"]

GRADCHECK_TOLERANCE = 1e-4
END_TO_END_TOLERANCE = 1e-3  # whole ranker stacks, gaze predictor included
_WORDS = ("alpha", "beta", "gamma", "delta", "omega", "##s")


@dataclass(frozen=True)
class GradcheckResult:
    name: str
    max_error: float
    tolerance: float = GRADCHECK_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_error < self.tolerance


def _vocab() -> Vocabulary:
    return Vocabulary.from_tokens(list(SPECIAL_TOKENS) + list(_WORDS))


def _tiny_gaze(vocab: Vocabulary, seed: int) -> GazePredictor:
    config = GazeModelConfig(vocab_size=len(vocab), embed_dim=6, lstm_hidden=4, layers=1, heads=2, d_ff=8)
    return GazePredictor(config, seed=seed)


def _tiny_encoder(vocab: Vocabulary) -> EncoderConfig:
    return EncoderConfig(vocab_size=len(vocab), layers=2, heads=2, d_model=8, d_ff=12, max_len=32)


_TRIPLE = TrainingTriple("alpha betas", "gamma alpha beta", "omega delta")


def _attention_check(seed: int):
    rng = np.random.default_rng(seed)
    params = ParameterSet()
    layer = EncoderLayerParams.create(params, "layer", 8, 2, 12, rng)
    E = Tensor(rng.normal(size=(5, 8)), requires_grad=True)
    G = Tensor(rng.uniform(0.1, 1.0, size=(5, 4)), requires_grad=True)
    mask = np.array([False, False, False, False, True])  # last key is [PAD]

    def loss() -> Tensor:
        out = attention(E, layer, mask, G)
        return (out * out).sum()

    return loss, [E, G] + list(params)


def _gaze_check(seed: int):
    vocab = _vocab()
    config = GazeModelConfig(vocab_size=len(vocab), embed_dim=6, lstm_hidden=8, layers=1, heads=2, d_ff=16)
    model = GazePredictor(config, seed=seed)
    records = [GazeRecord("d", "s0", w, 100.0 + 20 * i) for i, w in enumerate(("alpha", "betas", "gamma"))]
    examples = standardize_fixations(records, vocab, pad_length=1)  # [CLS] alpha beta ##s gamma [SEP]
    return (lambda: gaze_loss(model, examples)), list(model.params)


def _cross_check(seed: int):
    vocab = _vocab()
    model = CrossEncoderModel(vocab, _tiny_encoder(vocab), _tiny_gaze(vocab, seed), "all_layers", seed=seed)
    return (lambda: triple_loss(model, _TRIPLE)), model.trainable_parameters()


def _bi_check(seed: int):
    vocab = _vocab()
    model = BiEncoderModel(
        vocab, _tiny_encoder(vocab), _tiny_gaze(vocab, seed), "combined", d_out=6, m_q=6, m_d=10, seed=seed
    )
    return (lambda: triple_loss(model, _TRIPLE)), model.trainable_parameters()


def _maxsim_check(seed: int):
    rng = np.random.default_rng(seed)
    Eq = Tensor(rng.normal(size=(3, 4)), requires_grad=True)
    Ed = Tensor(rng.normal(size=(5, 4)), requires_grad=True)
    gq = Tensor(rng.uniform(0.1, 1.0, size=3), requires_grad=True)
    gd = Tensor(rng.uniform(0.1, 1.0, size=5), requires_grad=True)
    return (lambda: gaze_maxsim(Eq, Ed, gq, gd)), [Eq, Ed, gq, gd]


def _bce_check(seed: int):
    rng = np.random.default_rng(seed)
    scores = Tensor(rng.uniform(0.2, 0.8, size=4), requires_grad=True)
    return (lambda: pointwise_bce_loss(scores, [1.0, 0.0, 1.0, 0.0])), [scores]


def _pairwise_check(seed: int):
    rng = np.random.default_rng(seed)
    s_pos = Tensor(rng.normal(size=3), requires_grad=True)
    s_neg = Tensor(rng.normal(size=3), requires_grad=True)
    return (lambda: pairwise_ce_loss(s_pos, s_neg)), [s_pos, s_neg]


CHECKS: dict[str, tuple[Callable, float]] = {
    "gaze-modulated attention": (_attention_check, GRADCHECK_TOLERANCE),
    "gaze predictor mse": (_gaze_check, GRADCHECK_TOLERANCE),
    "gaze maxsim": (_maxsim_check, GRADCHECK_TOLERANCE),
    "pointwise bce": (_bce_check, GRADCHECK_TOLERANCE),
    "pairwise ce": (_pairwise_check, GRADCHECK_TOLERANCE),
    "cross-encoder triple loss": (_cross_check, END_TO_END_TOLERANCE),
    "bi-encoder triple loss": (_bi_check, END_TO_END_TOLERANCE),
}


def run_gradcheck_suite(seed: int = 0, max_coords: int = 6) -> list[GradcheckResult]:
    """Run every check; the caller decides what a failure means."""
    results = []
    for name, (build, tolerance) in CHECKS.items():
        loss, leaves = build(seed)
        error = finite_difference_check(loss, leaves, max_coords=max_coords, seed=seed)
        results.append(GradcheckResult(name, error, tolerance))
        logger.info(f"gradcheck {name}: max rel err {error:.2e}")
    return results
