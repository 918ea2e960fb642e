"""
Component logging.

Thin layer over loguru: every module asks for a component logger once and logs
structured key/value context through keyword arguments.
"""

from __future__ import annotations

import sys
from typing import TYPE_CHECKING

from loguru import logger

if TYPE_CHECKING:
    from loguru import Logger

_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[component]}</cyan> | {message} | {extra}"
)
_configured_level: str | None = None


def get_component_logger(component: str) -> Logger:
    """Return a logger bound to ``component`` (e.g. ``"btiepi.bti"``)."""
    return logger.bind(component=component)


def configure_logging(level: str = "WARNING") -> None:
    """Install a single stderr sink at ``level``; stdout stays free for JSON output."""
    global _configured_level
    level = level.upper()
    if _configured_level == level:
        return
    logger.remove()
    logger.configure(extra={"component": "btiepi"})
    logger.add(sys.stderr, level=level, format=_FORMAT, backtrace=False, diagnose=False)
    _configured_level = level
