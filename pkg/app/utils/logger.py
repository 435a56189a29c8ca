"""
Centralized logging configuration for the torus knot toolkit
"""

import logging
import os
import sys
from typing import Optional

def setup_logger(
    name: str = "torus_knots",
    level: Optional[str] = None,
    log_file: Optional[str] = None
) -> logging.Logger:
    """
    Set up a logger with consistent formatting and output.

    Console output goes to stderr; stdout is reserved for reports.

    Args:
        name: Logger name
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL);
            defaults to TORUS_LOG_LEVEL
        log_file: Optional file to write logs to; defaults to TORUS_LOG_FILE

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Avoid adding handlers multiple times
    if logger.handlers:
        return logger

    level = (level or os.environ.get("TORUS_LOG_LEVEL") or "WARNING").upper()
    logger.setLevel(getattr(logging, level, logging.WARNING))
    logger.propagate = False

    formatter = logging.Formatter(
        fmt='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = log_file or os.environ.get("TORUS_LOG_FILE")
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger

def get_logger(name: str = "torus_knots") -> logging.Logger:
    """Get a logger, configuring it on first use"""
    logger = logging.getLogger(name)
    return logger if logger.handlers else setup_logger(name)
