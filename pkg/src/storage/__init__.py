"""
Data files, TREC formats and checkpoints.
"""

from .models import CandidateRecord, DocumentRecord, GazeRecord, QueryRecord, TabularKind, TrainingTriple

__all__ = [
    "TabularKind",
    "QueryRecord",
    "DocumentRecord",
    "TrainingTriple",
    "CandidateRecord",
    "GazeRecord",
]
