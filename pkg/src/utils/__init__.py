"""
Utilities module for the gaze re-ranking pipeline.

This module contains utility functions and classes for:
- Logging configuration and Rich console summaries
- The package-wide exception hierarchy
"""

from .errors import (
    CheckpointError,
    ConfigError,
    FormatError,
    GazbyError,
    NumericalError,
    ShapeError,
    ValidationError,
)
from .structured_logger import get_logger

__all__ = [
    "get_logger",
    "GazbyError",
    "ValidationError",
    "ShapeError",
    "FormatError",
    "ConfigError",
    "CheckpointError",
    "NumericalError",
]
