"""Model checker configuration settings."""
from celery.utils import cached_property

from . import validators
from ._state import app_or_default
from .policies import FAMILIES
from .properties import MONITOR_NAMES

__all__ = ['Settings', 'settings', 'all_settings']

INJECTION_MODES = ('concurrent', 'serial')


class Settings:

    app = None

    default_explorer = 'default'
    default_mode = 'full'
    default_independence = 'actor'
    default_max_depth = 400
    default_packet_bound = 8
    default_step_bound_factor = 10
    default_parallel = 2
    default_enumerate_max_actors = 12
    default_enumerate_max_packets = 3
    default_crosscheck_max_switches = 3
    default_crosscheck_max_hosts = 3
    default_crosscheck_max_packets = 2
    default_debug_commutation = 0.0
    default_seed = 0
    default_report_max_states = 20
    default_scenario_packet_limit = 64
    default_scenario_validators = [
        validators.ensure_policy(*FAMILIES),
        validators.ensure_property(*MONITOR_NAMES),
        validators.ensure_injection_mode(*INJECTION_MODES),
        validators.limit_packets(default_scenario_packet_limit),
    ]

    def __init__(self, app=None):
        self.app = app_or_default(app or self.app)

    @cached_property
    def SDNMC_EXPLORER(self):
        return self._get('SDNMC_EXPLORER', self.default_explorer)

    @cached_property
    def SDNMC_MODE(self):
        return self._get('SDNMC_MODE', self.default_mode)

    @cached_property
    def SDNMC_INDEPENDENCE(self):
        return self._get('SDNMC_INDEPENDENCE', self.default_independence)

    @cached_property
    def SDNMC_MAX_DEPTH(self):
        return self._get('SDNMC_MAX_DEPTH', self.default_max_depth)

    @cached_property
    def SDNMC_PACKET_BOUND(self):
        return self._get('SDNMC_PACKET_BOUND', self.default_packet_bound)

    @cached_property
    def SDNMC_STEP_BOUND_FACTOR(self):
        return self._get(
            'SDNMC_STEP_BOUND_FACTOR', self.default_step_bound_factor)

    @cached_property
    def SDNMC_PARALLEL(self):
        return self._get('SDNMC_PARALLEL', self.default_parallel)

    @cached_property
    def SDNMC_ENUMERATE_MAX_ACTORS(self):
        return self._get(
            'SDNMC_ENUMERATE_MAX_ACTORS', self.default_enumerate_max_actors)

    @cached_property
    def SDNMC_ENUMERATE_MAX_PACKETS(self):
        return self._get(
            'SDNMC_ENUMERATE_MAX_PACKETS', self.default_enumerate_max_packets)

    @cached_property
    def SDNMC_CROSSCHECK_MAX_SWITCHES(self):
        return self._get(
            'SDNMC_CROSSCHECK_MAX_SWITCHES',
            self.default_crosscheck_max_switches)

    @cached_property
    def SDNMC_CROSSCHECK_MAX_HOSTS(self):
        return self._get(
            'SDNMC_CROSSCHECK_MAX_HOSTS', self.default_crosscheck_max_hosts)

    @cached_property
    def SDNMC_CROSSCHECK_MAX_PACKETS(self):
        return self._get(
            'SDNMC_CROSSCHECK_MAX_PACKETS',
            self.default_crosscheck_max_packets)

    @cached_property
    def SDNMC_DEBUG_COMMUTATION(self):
        # type: () -> float
        return self._get(
            'SDNMC_DEBUG_COMMUTATION', self.default_debug_commutation)

    @cached_property
    def SDNMC_SEED(self):
        return self._get('SDNMC_SEED', self.default_seed)

    @cached_property
    def SDNMC_REPORT_MAX_STATES(self):
        return self._get(
            'SDNMC_REPORT_MAX_STATES', self.default_report_max_states)

    @cached_property
    def SDNMC_SCENARIO_VALIDATORS(self):
        return self._get_lazy(
            'SDNMC_SCENARIO_VALIDATORS',
            lambda: list(self.default_scenario_validators))

    def _get(self, key, default=None):
        # type: (str, Any) -> Any
        return self._get_lazy(key, lambda: default)

    def _get_lazy(self, key, default=None):
        # type: (str, Callable[None, Any]) -> Any
        val = getattr(self.app.config, key, None)
        return val if val is not None else default()


settings = Settings()


def all_settings():
    return {n for n in dir(Settings) if n.isupper() and not n.startswith('__')}
