"""Structured logging configuration for the sparse recovery toolkit."""

import logging
import sys
from typing import Optional

import structlog
from pythonjsonlogger import jsonlogger

from ..config import settings


def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None):
    """
    Configure structured logging for the application.

    Logs go to standard error; standard output is reserved for the CSV and
    JSON data the CLI emits.

    Args:
        level: Log level name, defaults to ``settings.log_level``
        fmt: ``"json"`` or ``"console"``, defaults to ``settings.log_format``
    """
    level = (level or settings.log_level).upper()
    fmt = (fmt or settings.log_format).lower()

    handler = logging.StreamHandler(sys.stderr)
    if fmt == "json":
        handler.setFormatter(jsonlogger.JsonFormatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
    else:
        handler.setFormatter(logging.Formatter("%(message)s"))

    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, level))

    shared_processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
    ]

    if fmt == "json":
        # JSON logging for batch runs
        processors = shared_processors + [
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            # python-json-logger renders the event dict passed as record extras
            structlog.stdlib.render_to_log_kwargs,
        ]
    else:
        # Human-readable logging for interactive use
        processors = shared_processors + [
            structlog.processors.TimeStamper(fmt="%Y-%m-%d %H:%M:%S"),
            structlog.dev.ConsoleRenderer(colors=False),
        ]

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> structlog.BoundLogger:
    """
    Get a structured logger instance.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured structlog logger
    """
    return structlog.get_logger(name)


def log_solver_run(
    logger: structlog.BoundLogger,
    solver: str,
    iterations: int,
    converged: bool,
    objective: float,
    duration_ms: Optional[float] = None,
    **kwargs
):
    """
    Log a finished solver run with structured metadata.

    Args:
        logger: Structlog logger instance
        solver: Solver name (admm, irl1, ...)
        iterations: Iterations performed
        converged: Whether the stopping rule was met
        objective: Final objective value
        duration_ms: Wall time in milliseconds
        **kwargs: Additional context
    """
    logger.debug(
        "solver_finished",
        solver=solver,
        iterations=iterations,
        converged=converged,
        objective=objective,
        duration_ms=duration_ms,
        **kwargs
    )


def log_trial(
    logger: structlog.BoundLogger,
    penalty: str,
    s: int,
    replicate: int,
    rel_error: float,
    success: bool,
    **kwargs
):
    """
    Log one benchmark trial outcome.

    Args:
        logger: Structlog logger instance
        penalty: Penalty specification string
        s: Sparsity level
        replicate: Replicate index
        rel_error: Relative recovery error
        success: Whether the trial counts as a success
        **kwargs: Additional context
    """
    logger.debug(
        "trial_finished",
        penalty=penalty,
        s=s,
        replicate=replicate,
        rel_error=rel_error,
        success=success,
        **kwargs
    )


# Initialize logging on module import
setup_logging()
