"""Logging configuration.

Library modules use stdlib `logging.getLogger(__name__)`; the CLI and the
sweep runner emit key/value events through structlog. Everything goes to
stderr so reports written to stdout stay parseable.
"""

import logging
import logging.handlers
import sys
from contextlib import AbstractContextManager
from pathlib import Path
from typing import Any, Optional

import structlog

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_FILE_BYTES = 10 * 1024 * 1024
LOG_FILE_BACKUPS = 5

# numeric stacks that chatter at DEBUG
_QUIET_LOGGERS = ("matplotlib", "numexpr", "numba")


def _console_handler(level: int, json_format: bool) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    fmt = "%(message)s" if json_format else LOG_FORMAT
    handler.setFormatter(logging.Formatter(fmt, datefmt=DATE_FORMAT))
    return handler


def _file_handler(path: Path, level: int) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        path, maxBytes=LOG_FILE_BYTES, backupCount=LOG_FILE_BACKUPS
    )
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    return handler


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    json_format: bool = False,
) -> None:
    """Configure stdlib logging and structlog for a CLI run."""
    log_level = getattr(logging, level.upper(), logging.INFO)

    handlers = [_console_handler(log_level, json_format)]
    if log_file:
        handlers.append(_file_handler(Path(log_file), log_level))
    logging.basicConfig(level=log_level, handlers=handlers, force=True)
    for name in _QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    renderer = structlog.processors.JSONRenderer() if json_format else structlog.dev.ConsoleRenderer()
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )


def get_logger(name: str) -> structlog.BoundLogger:
    """Get a structured logger."""
    return structlog.get_logger(name)


def log_context(**values: Any) -> AbstractContextManager:
    """Attach key/value pairs (command, position, method) to every structlog event in the block."""
    return structlog.contextvars.bound_contextvars(**values)
