import pytest

from hypothesis import HealthCheck, settings
from unittest.mock import patch

from sdnmc import Checker
from sdnmc import _state

from t.helpers import scenario

# every test gets the function scoped app fixtures below.
settings.register_profile(
    'sdnmc', suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile('sdnmc')


@pytest.fixture(autouse=True)
def test_cases_calls_setup_teardown(request, test_cases_has_app):
    if request.instance:
        # we also call .setup() and .teardown() after every test method.
        setup = getattr(request.instance, 'setup', None)
        setup and setup()
    yield
    if request.instance:
        teardown = getattr(request.instance, 'teardown', None)
        teardown and teardown()


@pytest.fixture()
def app():
    _tls, _state._tls = _state._tls, _state._TLS()
    app = Checker(set_as_current=True)
    _default_app, _state.default_app = _state.default_app, app

    yield app

    _state.default_app = _default_app
    _state._tls = _tls


@pytest.fixture()
def patching():
    patches = []

    def _patching(target, *args, **kwargs):
        p = patch(target, *args, **kwargs)
        patches.append(p)
        return p.start()

    yield _patching

    for p in reversed(patches):
        p.stop()


@pytest.fixture(autouse=True)
def test_cases_has_app(request, app, patching):
    if request.instance:
        if not hasattr(request.instance, 'app'):
            request.instance.app = app
        if not hasattr(request.instance, 'patching'):
            request.instance.patching = patching


@pytest.fixture()
def lb_scenario():
    return scenario('lb', properties=['loop'])
