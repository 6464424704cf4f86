"""Utility modules for the sparse recovery toolkit."""

from .logging import get_logger, log_solver_run, log_trial, setup_logging

__all__ = ["get_logger", "log_solver_run", "log_trial", "setup_logging"]
