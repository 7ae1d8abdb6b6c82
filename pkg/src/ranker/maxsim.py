"""
Late-interaction scorers over L2-normalized token embeddings.

    plain:  S = sum_i max_j cos(q_i, d_j)
    gaze:   S = sum_i gq(i) * max_j [cos(q_i, d_j) * gd(j)]
    tf-idf: S = sum_i idf(q_i) * max_j cos(q_i, d_j)

Document gaze sits inside the max since j is bound by it. Callers pass only
the rows that take part: query rows without [CLS]/[SEP]/[PAD], document
rows without [PAD].
"""

from collections.abc import Sequence

import numpy as np

from numerics import Tensor, as_tensor
from ranker.idf import IdfTable
from utils.errors import ShapeError, ValidationError

__all__ = ["maxsim", "gaze_maxsim", "idf_maxsim"]


def _check(Eq: Tensor, Ed: Tensor) -> None:
    if Eq.shape[0] == 0:
        raise ValidationError("MaxSim needs at least one query embedding")
    if Ed.shape[0] == 0:
        raise ValidationError("MaxSim needs at least one document embedding")
    if Eq.shape[1] != Ed.shape[1]:
        raise ShapeError(f"query width {Eq.shape[1]} does not match document width {Ed.shape[1]}")


def _weighted(Eq: Tensor, Ed: Tensor, gq, gd) -> Tensor:
    Eq, Ed = as_tensor(Eq), as_tensor(Ed)
    _check(Eq, Ed)
    similarity = Eq @ Ed.T
    if gd is not None:
        gd = as_tensor(gd)
        if gd.shape != (Ed.shape[0],):
            raise ShapeError(f"document gaze {gd.shape} does not match {Ed.shape[0]} rows")
        similarity = similarity * gd.reshape(1, Ed.shape[0])
    best = similarity.max(axis=1)
    if gq is None:
        return best.sum()
    gq = as_tensor(gq)
    if gq.shape != (Eq.shape[0],):
        raise ShapeError(f"query weights {gq.shape} do not match {Eq.shape[0]} rows")
    return (best * gq).sum()


def maxsim(Eq: Tensor, Ed: Tensor) -> Tensor:
    return _weighted(Eq, Ed, None, None)


def gaze_maxsim(Eq: Tensor, Ed: Tensor, gq, gd) -> Tensor:
    """
    Gaze-weighted MaxSim.

    Args:
        Eq: qlen x d_out query embeddings, rows L2-normalized
        Ed: dlen x d_out document embeddings, rows L2-normalized
        gq: Query-token gaze, shape (qlen,)
        gd: Document-token gaze, shape (dlen,)

    Returns:
        Scalar relevance score tensor
    """
    return _weighted(Eq, Ed, gq, gd)


def idf_maxsim(Eq: Tensor, Ed: Tensor, query_tokens: Sequence[str], idf: IdfTable) -> Tensor:
    """MaxSim with each query row weighted by the idf of its piece."""
    if len(query_tokens) != Eq.shape[0]:
        raise ShapeError(f"{len(query_tokens)} query tokens for {Eq.shape[0]} embedding rows")
    weights = np.asarray(idf.weights(query_tokens), dtype=as_tensor(Eq).dtype)
    return _weighted(Eq, Ed, weights, None)
