"""Logging utilities."""
from kombu.log import get_logger as _get_logger

__all__ = ['base_logger', 'get_logger']

base_logger = _get_logger('sdnmc')


def get_logger(name, parent=base_logger):
    """Get logger by name."""
    assert isinstance(name, str)
    logger = _get_logger(name)
    logger.parent = parent
    return logger
