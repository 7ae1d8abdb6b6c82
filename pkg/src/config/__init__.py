"""
Configuration module for the GazBy re-ranking pipeline.

This module contains all configuration settings, including:
- Environment-driven settings (seed, data directory, logging)
- Desk-scale model and training constants
- Ranker variant registry and per-run configuration files
"""

from .environment import (
    CONCURRENT_SCORERS,
    DATA_DIR,
    DEBUG,
    ENVIRONMENT,
    get_seed,
)

__all__ = [
    "DEBUG",
    "ENVIRONMENT",
    "CONCURRENT_SCORERS",
    "DATA_DIR",
    "get_seed",
]
