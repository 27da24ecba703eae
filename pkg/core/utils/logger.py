"""
Central logging utility for infoplan.
Provides consistent logging across the library and the command-line tools.
"""
import os
import logging
from logging.handlers import RotatingFileHandler
import sys
from typing import Optional, Union

from core.config.app_config import AppConfig

# Define log format
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def setup_logger(name, level: Union[int, str] = logging.INFO, log_file: Optional[str] = None):
    """
    Set up a logger with consistent formatting.

    Args:
        name (str): Name of the logger
        level (int | str): Logging level
        log_file (str, optional): Path to log file. If None, only console logging is used.

    Returns:
        logging.Logger: Configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    if logger.handlers:
        logger.handlers = []

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

    # Library trees stop here so records are not printed twice by the root logger
    logger.propagate = False
    return logger


def get_logger(name, level: Optional[Union[int, str]] = None):
    """
    Get a logger with the given name, configured from AppConfig.

    Args:
        name (str): Name of the logger
        level (int | str, optional): Overrides AppConfig.LOG_LEVEL

    Returns:
        logging.Logger: Logger instance
    """
    return setup_logger(name, level=level or AppConfig.LOG_LEVEL, log_file=AppConfig.LOG_FILE)


def configure_logging(level: Optional[Union[int, str]] = None):
    """Install handlers on the package logger trees (called by the CLI only)."""
    for tree in ("core", "cli"):
        get_logger(tree, level=level)
