import pytest

from unittest.mock import Mock

from sdnmc.conf import Settings, all_settings
from sdnmc.validators import ensure_policy


@pytest.fixture()
def app():
    return Mock(name='app')


@pytest.mark.parametrize('setting,default_attr', [
    ('SDNMC_EXPLORER', 'default_explorer'),
    ('SDNMC_MODE', 'default_mode'),
    ('SDNMC_INDEPENDENCE', 'default_independence'),
    ('SDNMC_MAX_DEPTH', 'default_max_depth'),
    ('SDNMC_PACKET_BOUND', 'default_packet_bound'),
    ('SDNMC_STEP_BOUND_FACTOR', 'default_step_bound_factor'),
    ('SDNMC_PARALLEL', 'default_parallel'),
    ('SDNMC_ENUMERATE_MAX_ACTORS', 'default_enumerate_max_actors'),
    ('SDNMC_ENUMERATE_MAX_PACKETS', 'default_enumerate_max_packets'),
    ('SDNMC_CROSSCHECK_MAX_SWITCHES', 'default_crosscheck_max_switches'),
    ('SDNMC_CROSSCHECK_MAX_HOSTS', 'default_crosscheck_max_hosts'),
    ('SDNMC_CROSSCHECK_MAX_PACKETS', 'default_crosscheck_max_packets'),
    ('SDNMC_DEBUG_COMMUTATION', 'default_debug_commutation'),
    ('SDNMC_SEED', 'default_seed'),
    ('SDNMC_REPORT_MAX_STATES', 'default_report_max_states'),
])
def test_settings(setting, default_attr, app):
    s1 = Settings(app=app)
    setattr(app.config, setting, None)
    assert getattr(s1, setting) == getattr(s1, default_attr)

    setattr(app.config, setting, 'just')
    s2 = Settings(app=app)
    assert getattr(s2, setting) == 'just'


def test_defaults(app):
    s = Settings(app=app)
    assert s.default_explorer == 'default'
    assert s.default_mode == 'full'
    assert s.default_independence == 'actor'
    assert s.default_max_depth == 400
    assert s.default_packet_bound == 8
    assert s.default_step_bound_factor == 10


def test_zero_is_not_unset(app):
    app.config.SDNMC_DEBUG_COMMUTATION = 0.0
    app.config.SDNMC_SEED = 0
    s = Settings(app=app)
    assert s.SDNMC_DEBUG_COMMUTATION == 0.0
    assert s.SDNMC_SEED == 0


class test_SDNMC_SCENARIO_VALIDATORS:

    def test_default(self, app):
        app.config.SDNMC_SCENARIO_VALIDATORS = None
        validators = Settings(app=app).SDNMC_SCENARIO_VALIDATORS
        assert [v._validator for v in validators] == [
            'ensure_policy', 'ensure_property', 'ensure_injection_mode',
            'limit_packets',
        ]

    def test_default_is_copied(self, app):
        app.config.SDNMC_SCENARIO_VALIDATORS = None
        s = Settings(app=app)
        s.SDNMC_SCENARIO_VALIDATORS.append(Mock(name='validator'))
        assert len(Settings.default_scenario_validators) == 4

    def test_custom(self, app):
        custom = [ensure_policy('LB')]
        app.config.SDNMC_SCENARIO_VALIDATORS = custom
        assert Settings(app=app).SDNMC_SCENARIO_VALIDATORS is custom


def test_all_settings():
    settings = all_settings()
    assert 'SDNMC_EXPLORER' in settings
    assert 'SDNMC_SCENARIO_VALIDATORS' in settings
    assert all(s.startswith('SDNMC_') for s in settings)
