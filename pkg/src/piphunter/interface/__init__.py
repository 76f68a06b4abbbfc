"""Operator CLI and analyst HTTP API over the hunting pipeline."""

from .api import ApiState, create_api
from .cli import build_api_state, main
from .config import PipelineConfig, load_config, parse_config
from .runtime import Runtime

__all__ = [
    "ApiState",
    "create_api",
    "build_api_state",
    "main",
    "PipelineConfig",
    "load_config",
    "parse_config",
    "Runtime",
]
