"""
Abstract base ranker defining the contract shared by the cross- and bi-encoder.

A ranker owns its encoder and head parameters and holds a reference to a
gaze predictor. Training treats both as one model: named_parameters()
lists the ranker's own weights followed by the predictor's under a
"gaze." prefix, and freezing the gaze model just leaves that second half
out of the optimizer.
"""

from abc import ABC, abstractmethod

import numpy as np

from gaze.model import GazePredictor
from numerics import Parameter, ParameterSet, Tensor, as_tensor, no_grad
from tokenizer import TokenSequence, Vocabulary, wordpiece_tokenize
from utils.errors import ShapeError, ValidationError
from utils.structured_logger import get_logger

GAZE_PREFIX = "gaze."


class BaseRanker(ABC):
    """
    Abstract base class for gaze-aware re-rankers.

    Subclasses build their parameters into self.params in __init__ and
    implement score_tensor() and config_echo().
    """

    kind: str = ""

    def __init__(self, vocab: Vocabulary, gaze: GazePredictor | None, dtype=np.float64, seed: int = 0):
        self.logger = get_logger(self.__class__.__name__)
        self.vocab = vocab
        self.gaze = gaze
        self.seed = seed
        self.params = ParameterSet(dtype)
        self.training = False
        self.gaze_frozen = False
        self._gaze_cache: dict[TokenSequence, Tensor] = {}
        if gaze is not None and gaze.params.dtype != self.params.dtype:
            raise ValidationError(
                f"gaze predictor dtype {gaze.params.dtype} differs from ranker dtype {self.params.dtype}"
            )

    # ---- parameters ----

    def named_parameters(self) -> list[tuple[str, Parameter]]:
        named = list(self.params.items())
        if self.gaze is not None:
            named += [(GAZE_PREFIX + name, p) for name, p in self.gaze.params.items()]
        return named

    def trainable_parameters(self, freeze_gaze: bool = False) -> list[Parameter]:
        params = list(self.params)
        if self.gaze is not None and not freeze_gaze:
            params += list(self.gaze.params)
        return params

    def zero_gradients(self) -> None:
        self.params.zero_gradients()
        if self.gaze is not None:
            self.gaze.params.zero_gradients()

    def parameter_count(self) -> int:
        return sum(p.size for _, p in self.named_parameters())

    def snapshot(self) -> dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters()}

    def restore(self, snapshot: dict[str, np.ndarray]) -> None:
        params = dict(self.named_parameters())
        for name, value in snapshot.items():
            params[name].data[...] = value
        self._gaze_cache.clear()

    def freeze_gaze(self, frozen: bool = True) -> None:
        """While frozen, gaze is predicted once per framed sequence and kept off the tape."""
        if frozen != self.gaze_frozen:
            self._gaze_cache.clear()
        self.gaze_frozen = frozen

    @property
    def dtype(self):
        return self.params.dtype

    # ---- modes ----

    def train(self, training: bool = True) -> None:
        """Toggle dropout; scoring stays deterministic while training is False."""
        self.training = training
        for stack in self.encoder_stacks():
            stack.training = training
            stack.dropout_rng = np.random.default_rng(self.seed) if training else None

    def eval(self) -> None:
        self.train(False)

    # ---- helpers ----

    def tokenize(self, text: str, what: str = "text") -> list[str]:
        pieces = wordpiece_tokenize(text, self.vocab)
        if not pieces:
            raise ValidationError(f"{what} is empty after tokenization: {text!r}")
        return pieces

    def gaze_vector(self, tokens: TokenSequence, override=None) -> Tensor:
        """
        Per-token gaze for a framed sequence.

        Args:
            tokens: Framed input
            override: None to run the predictor, a scalar for constant gaze,
                      or an array with one value per token

        Returns:
            Tensor of shape (n,)
        """
        n = tokens.n
        if override is None:
            if self.gaze is None:
                raise ValidationError(f"{self.__class__.__name__} has no gaze predictor attached")
            if not self.gaze_frozen:
                return self.gaze.forward(tokens)
            cached = self._gaze_cache.get(tokens)
            if cached is None:
                with no_grad():
                    cached = self.gaze.forward(tokens)
                self._gaze_cache[tokens] = cached
            return cached
        if np.isscalar(override):
            return Tensor(np.full(n, float(override), dtype=self.dtype))
        g = as_tensor(override)
        if g.shape != (n,):
            raise ShapeError(f"gaze override of shape {g.shape} for {n} tokens")
        return g

    # ---- contract ----

    @abstractmethod
    def encoder_stacks(self) -> list:
        """Encoder stacks whose dropout follows train()/eval()."""

    @abstractmethod
    def score_tensor(self, query: str, document: str) -> Tensor:
        """Differentiable relevance score for one pair under the model's mode."""

    @abstractmethod
    def config_echo(self) -> dict[str, str]:
        """Every setting a checkpoint must agree on, as strings."""

    def score(self, query: str, document: str) -> float:
        with no_grad():
            return self.score_tensor(query, document).item()
