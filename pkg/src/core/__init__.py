"""
Core module for the GazBy re-ranking pipeline.

Provides orchestration and model construction for the CLI pipelines.
"""

from .component_factory import ComponentFactory
from .orchestrator import PipelineOrchestrator

__all__ = [
    "ComponentFactory",
    "PipelineOrchestrator",
]
