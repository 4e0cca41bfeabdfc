"""
Logging configuration for the lattice protein move explorer.

Console records go through colorlog and default to stderr, so the command
line keeps stdout free for its machine-parsable output. An optional rotating
file receives the same records with function and line information. Long
computations (enumerations, walks, annealing runs) report through the
``log_computation_*`` helpers.
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional, TextIO

try:
    import colorlog

    COLORLOG_AVAILABLE = True
except ImportError:
    COLORLOG_AVAILABLE = False

from .settings import settings

CONSOLE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
LEVEL_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red,bg_white",
}
COMPUTATION_LOGGER = "src.computation"

# chatty third party loggers
QUIET_LOGGERS = ("Bio", "concurrent.futures")


def _console_handler(stream: TextIO, colored: bool) -> logging.Handler:
    if colored and COLORLOG_AVAILABLE:
        handler = colorlog.StreamHandler(stream)
        handler.setFormatter(
            colorlog.ColoredFormatter(
                "%(log_color)s" + CONSOLE_FORMAT, datefmt="%H:%M:%S", log_colors=LEVEL_COLORS
            )
        )
        return handler
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    return handler


def _file_handler(log_file: str, max_bytes: int, backup_count: int) -> logging.Handler:
    Path(log_file).parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        log_file, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
    )
    handler.setFormatter(logging.Formatter(FILE_FORMAT))
    return handler


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    max_bytes: int = 10 * 1024 * 1024,  # 10MB
    backup_count: int = 5,
    enable_colors: bool = True,
    stream: Optional[TextIO] = None,
) -> None:
    """
    Configure the root logger. Replaces any handlers installed earlier.

    Args:
        log_level: Logging level name; settings.log_level (or DEBUG in debug mode) if None
        log_file: Rotating log file, created with its parent directories
        max_bytes: Maximum size of log file before rotation
        backup_count: Number of rotated files to keep
        enable_colors: Colored console output when colorlog is installed
        stream: Console stream, stderr by default
    """
    if log_level is None:
        log_level = "DEBUG" if settings.debug else settings.log_level
    log_file = log_file or settings.log_file
    level = getattr(logging, log_level.upper(), logging.WARNING)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    handlers = [_console_handler(stream if stream is not None else sys.stderr, enable_colors)]
    if log_file:
        handlers.append(_file_handler(log_file, max_bytes, backup_count))
    for handler in handlers:
        handler.setLevel(level)
        root_logger.addHandler(handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(max(level, logging.WARNING))

    root_logger.debug(f"Logging configured with level {log_level}, file {log_file or 'none'}")


def get_logger(name: str) -> logging.Logger:
    """Logger for a module, usually called with __name__."""
    return logging.getLogger(name)


def _context(kwargs: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in kwargs.items())


def log_computation_start(operation: str, **kwargs) -> None:
    """
    Log the start of a long computation.

    Args:
        operation: Description of the operation, e.g. "neighbor count"
        **kwargs: Parameters of the run, logged as key=value pairs
    """
    get_logger(COMPUTATION_LOGGER).info(f"Starting {operation} - {_context(kwargs)}")


def log_computation_progress(operation: str, progress: str, **kwargs) -> None:
    # per-step records; skip the formatting when DEBUG is off
    logger = get_logger(COMPUTATION_LOGGER)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(f"{operation}: {progress} - {_context(kwargs)}")


def log_computation_complete(
    operation: str, result_summary: Optional[str] = None, **kwargs
) -> None:
    """Log the end of a computation with an optional result summary."""
    logger = get_logger(COMPUTATION_LOGGER)
    parts = [f"{operation} completed"]
    if result_summary:
        parts.append(result_summary)
    if kwargs:
        parts.append(_context(kwargs))
    logger.info(" - ".join(parts))
