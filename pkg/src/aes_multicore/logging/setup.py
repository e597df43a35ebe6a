import sys
from pathlib import Path
from loguru import logger

from aes_multicore.config.settings import config


def setup_logging(level: str | None = None, log_dir: str | Path | None = None, worker: bool = False):
    """
    Sets up the loguru logging system for the application.
    - Removes default handlers.
    - Adds a colored console logger (plain WARNING+ for worker processes,
      whose stderr is captured by the coordinator).
    - Adds a rotating file logger when a log directory is configured.
    """
    logger.remove()

    if worker:
        logger.add(
            sys.stderr,
            level="WARNING",
            format="{level: <8} | {name}:{function} - {message}",
            colorize=False,
        )
        return

    log_level = (level or config.logging.get('level', 'INFO')).upper()
    logger.add(
        sys.stderr,
        level=log_level,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>",
        colorize=True
    )

    log_dir = log_dir if log_dir is not None else config.logging.get('dir')
    if log_dir:
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_dir / "aes_mc_{time:YYYY-MM-DD}.log",
            level="DEBUG",  # Log everything to the file
            rotation="00:00",  # New file at midnight
            retention="7 days",
            enqueue=True,  # Make logging non-blocking
            backtrace=True,
            diagnose=True,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"
        )

    logger.debug(f"Logging system initialized at {log_level}.")
