import itertools
import math

import numpy as np


class DummyClass:
    """
    A dummy class for testing purposes on component_factory.py

    needs arg and kwargs
    """

    def __init__(self, *args, **kwargs):
        self.args = args
        self.kwargs = kwargs

    def parameter_count(self) -> int:
        return 0


# ---- brute-force metric oracles ----
# Plain loops over lists, no shared code with evaluation/


def oracle_precision(ranked: list[str], relevant: set[str], k: int) -> float:
    hits = 0
    for docid in ranked[:k]:
        if docid in relevant:
            hits += 1
    return hits / k


def oracle_average_precision(ranked: list[str], relevant: set[str]) -> float:
    if not relevant:
        return 0.0
    precisions = []
    for i in range(len(ranked)):
        if ranked[i] in relevant:
            top = ranked[: i + 1]
            precisions.append(len([d for d in top if d in relevant]) / (i + 1))
    return sum(precisions) / len(relevant)


def oracle_reciprocal_rank(ranked: list[str], relevant: set[str]) -> float:
    for i in range(len(ranked)):
        if ranked[i] in relevant:
            return 1.0 / (i + 1)
    return 0.0


def _gain(grade: int, gain: str) -> float:
    return 2.0**grade - 1.0 if gain == "exp" else float(grade)


def _dcg(grades: list[int], k: int, gain: str) -> float:
    total = 0.0
    for i, grade in enumerate(grades[:k]):
        total += _gain(grade, gain) / math.log2(i + 2)
    return total


def oracle_ndcg(ranked: list[str], grades: dict[str, int], k: int, gain: str = "exp") -> float:
    """Ideal DCG found by trying every ordering of the judged documents."""
    ideal = max(
        (_dcg(list(order), k, gain) for order in itertools.permutations(grades.values())),
        default=0.0,
    )
    if ideal == 0.0:
        return 0.0
    return _dcg([grades.get(d, 0) for d in ranked], k, gain) / ideal


def random_instance(rng: np.random.Generator, n_queries: int = 3, pool: int = 10, judged: int = 6):
    """Random graded judgments and a random ranked run over a shared document pool."""
    docs = [f"d{i}" for i in range(pool)]
    judgments = []
    run_scores = {}
    for q in range(n_queries):
        qid = f"q{q}"
        for docid in rng.choice(docs, size=judged, replace=False):
            judgments.append((qid, str(docid), int(rng.integers(0, 4))))
        ranked = rng.choice(docs, size=int(rng.integers(1, pool + 1)), replace=False)
        run_scores[qid] = [(str(docid), float(rng.normal())) for docid in ranked]
    return judgments, run_scores


# Small enough for a full train -> rerank -> evaluate cycle in seconds
TINY_RUN = {
    "dtype": "float64",
    "layers": 1,
    "heads": 2,
    "d_model": 8,
    "d_ff": 16,
    "max_len": 64,
    "m_q": 8,
    "m_d": 40,
    "d_out": 6,
    "gaze_embed_dim": 6,
    "gaze_lstm_hidden": 4,
    "gaze_layers": 1,
    "gaze_heads": 2,
    "gaze_d_ff": 8,
    "gaze_epochs": 1,
    "gaze_batch_size": 8,
    "gaze_lr": 1e-2,
    "epochs": 1,
    "batch_size": 4,
    "max_steps": 2,
    "lr": 1e-3,
    "workers": 2,
}
