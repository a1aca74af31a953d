"""Shared configuration, logging and error utilities."""

from .config import Settings, YAMLConfig, get_settings, get_yaml_config
from .logging import get_logger, log_context, setup_logging

__all__ = [
    "Settings",
    "YAMLConfig",
    "get_settings",
    "get_yaml_config",
    "get_logger",
    "log_context",
    "setup_logging",
]
