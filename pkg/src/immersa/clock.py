"""Timing tools

Contents:
    timer: logs the time it takes for the wrapped `process` to complete.

To Do:


"""
from __future__ import annotations

import functools
import logging
import time
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Callable

logger = logging.getLogger(__name__)


def timer(process: Callable[..., Any]) -> Callable[..., Any]:
    """Decorator for logging the length of time a process takes.

    Args:
        process: wrapped callable to compute the time it takes to complete its
            execution.

    Returns:
        Callable[..., Any]: `process` wrapped so that each call logs its
            elapsed wall time at INFO level.

    """
    try:
        name = process.__name__
    except AttributeError:
        name = process.__class__.__name__
    def convert_time(seconds: float) -> tuple[int, int, float]:
        minutes, seconds = divmod(seconds, 60)
        hours, minutes = divmod(minutes, 60)
        return int(hours), int(minutes), seconds
    @functools.wraps(process)
    def decorated(*args: Any, **kwargs: Any) -> Any:
        start = time.perf_counter()
        result = process(*args, **kwargs)
        h, m, s = convert_time(time.perf_counter() - start)
        logger.info('%s completed in %d:%02d:%06.3f', name, h, m, s)
        return result
    return decorated
