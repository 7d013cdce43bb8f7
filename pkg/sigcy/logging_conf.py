"""
Logging configuration for sigcy

Console records are written through tqdm.write, so the check rows logged while a
count sweep runs land above its progress bar instead of tearing it.
"""
import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

from tqdm import tqdm

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class TqdmHandler(logging.StreamHandler):
    """Stream handler that cooperates with active tqdm bars"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            tqdm.write(self.format(record), file=self.stream)
            self.flush()
        except Exception:
            self.handleError(record)


def _level(name: str) -> int:
    level = logging.getLevelName(name.upper())
    return level if isinstance(level, int) else logging.INFO


def setup_logging(
    log_level: str = "INFO",
    log_file: Optional[str] = None,
    name: str = "sigcy",
    quiet: bool = False,
    stream: Optional[TextIO] = None,
) -> logging.Logger:
    """
    Configure the package logger

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL); unknown
            names fall back to INFO
        log_file: Optional log file path, always written at log_level
        name: Logger name (child loggers "sigcy.*" propagate to it)
        quiet: console shows warnings and errors only
        stream: console stream, stdout when omitted

    Returns:
        Configured logger instance
    """
    level = _level(log_level)

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Re-running the CLI in one process must not stack handlers or leak files
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console_handler = TqdmHandler(stream or sys.stdout)
    console_handler.setLevel(max(level, logging.WARNING) if quiet else level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
