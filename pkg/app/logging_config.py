"""
Logging setup shared by the CLI and the HTTP service.

Library modules only ask for ``logging.getLogger(__name__)``; the entry points
call :func:`configure_logging` once.  Verification timings go to the separate
``metrics`` logger as pipe-delimited records.
"""

import logging
import logging.handlers
import os
import sys

from .config import Settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s'

metrics_logger = logging.getLogger("metrics")

_configured = False


def configure_logging(settings: Settings, console: bool = True) -> None:
    """
    Attach console and rotating file handlers to the ``app`` logger tree.

    Args:
        settings: Application settings (log directory and level)
        console: Also log to stderr. The CLI keeps stdout for tables.
    """
    global _configured
    if _configured:
        return

    root = logging.getLogger("app")
    root.setLevel(logging.DEBUG if settings.DEBUG else settings.LOG_LEVEL.upper())

    log_format = logging.Formatter(LOG_FORMAT)
    os.makedirs(settings.LOG_DIR, exist_ok=True)

    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(log_format)
        root.addHandler(console_handler)

    file_handler = logging.handlers.RotatingFileHandler(
        os.path.join(settings.LOG_DIR, 'toolkit.log'),
        maxBytes=10485760,  # 10MB
        backupCount=5
    )
    file_handler.setFormatter(log_format)
    root.addHandler(file_handler)

    # Configure metrics logging
    metrics_logger.setLevel(logging.INFO)
    metrics_handler = logging.handlers.RotatingFileHandler(
        os.path.join(settings.LOG_DIR, 'metrics.log'),
        maxBytes=10485760,  # 10MB
        backupCount=5
    )
    metrics_handler.setFormatter(logging.Formatter('%(asctime)s - %(message)s'))
    metrics_logger.addHandler(metrics_handler)

    _configured = True
