from .log_manager import logger

__all__ = ["logger"]
