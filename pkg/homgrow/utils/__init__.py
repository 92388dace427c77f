from .logging_utils import configure_logging, get_logger
from .decorators import measure_time

__all__ = ["configure_logging", "get_logger", "measure_time"]
