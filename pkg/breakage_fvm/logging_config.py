import logging

from pythonjsonlogger.json import JsonFormatter
from rich.logging import RichHandler

PACKAGE_LOGGER = "breakage_fvm"


def configure_logging(level: str = "INFO", json_logs: bool = False, stream=None) -> logging.Logger:
    """Install a single handler on the package logger.

    Args:
        level: Standard logging level name.
        json_logs: Emit one JSON object per record instead of rich console output.
        stream: Optional stream for the JSON handler (defaults to stderr).
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.handlers.clear()

    if json_logs:
        handler: logging.Handler = logging.StreamHandler(stream)
        handler.setFormatter(
            JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s")
        )
    else:
        handler = RichHandler(show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter("%(message)s"))

    logger.addHandler(handler)
    logger.setLevel(level.upper())
    logger.propagate = False
    return logger
