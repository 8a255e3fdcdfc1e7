"""Internal state."""
import threading

__all__ = [
    'current_app', 'set_current_app', 'set_default_app', 'app_or_default',
]


class _TLS(threading.local):
    current_app = None


_tls = _TLS()

default_app = None


def current_app():
    """Return the currently active checker for this thread."""
    app = _tls.current_app
    if app is None:
        if default_app is None:
            from sdnmc.app import Checker
            set_default_app(Checker())
        return default_app
    return app


def set_current_app(app):
    """Set thread-local current checker instance."""
    _tls.current_app = app


def set_default_app(app):
    """Set default checker instance."""
    global default_app
    default_app = app


def app_or_default(app):
    """Return app if defined, otherwise return the default checker."""
    return app if app is not None else current_app()
