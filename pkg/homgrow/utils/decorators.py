import time
from functools import wraps

from homgrow.utils.logging_utils import get_logger

_logger = get_logger("timing")


def measure_time(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        end = time.perf_counter()
        _logger.debug("%s took %.3f s", func.__qualname__, end - start)
        return result
    return wrapper
