"""
Logging Module
Provides centralized logging configuration for the lab
"""

import logging
import sys
from pathlib import Path
from logging.handlers import RotatingFileHandler

import colorlog

from .config import config

LOG_COLORS = {
    'DEBUG': 'cyan',
    'INFO': 'green',
    'WARNING': 'yellow',
    'ERROR': 'red',
    'CRITICAL': 'bold_red',
}


def setup_logger(name: str = "manakov-lab") -> logging.Logger:
    """
    Set up and configure a logger instance

    Console output goes to stderr so that command output on stdout stays clean.

    Args:
        name: Logger name

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, config.logging.level.upper(), logging.INFO))
    logger.propagate = False

    # Remove existing handlers
    logger.handlers.clear()

    formatter = logging.Formatter(config.logging.format)

    # Console handler
    if config.logging.console_enabled:
        console_handler = logging.StreamHandler(sys.stderr)
        if config.logging.color:
            console_handler.setFormatter(colorlog.ColoredFormatter(
                "%(log_color)s" + config.logging.format,
                log_colors=LOG_COLORS,
            ))
        else:
            console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    # File handler with rotation
    if config.logging.file_enabled:
        logs_dir = Path(config.paths.logs_dir)
        logs_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            logs_dir / f"{name}.log",
            maxBytes=config.logging.max_file_size,
            backupCount=config.logging.backup_count
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level: str):
    """Change the level of the default logger at runtime"""
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))


# Create default logger
logger = setup_logger()
