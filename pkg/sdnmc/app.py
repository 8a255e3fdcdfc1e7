"""Model checker application."""
from operator import attrgetter

from celery.utils import cached_property
from celery.utils.collections import AttributeDict
from celery.utils.imports import symbol_by_name

from . import _state
from .utils.log import get_logger

logger = get_logger(__name__)


def _unpickle_appattr(reverse_name, kwargs):
    return attrgetter(reverse_name)(_state.current_app())(**kwargs)


class Checker:
    """Model checker application.

    Arguments:
        config (Union[Mapping, Any]): Object or mapping with ``SDNMC_*``
            attributes overriding the defaults in :class:`~sdnmc.conf.Settings`.
        explorer (Union[str, Explorer]): Explorer backend name or class,
            default is taken from :setting:`SDNMC_EXPLORER`.
    """

    settings_cls = 'sdnmc.conf:Settings'
    scenario_cls = 'sdnmc.scenario:ScenarioFile'
    options_cls = 'sdnmc.explore.base:ExplorationOptions'

    explorers = {  # type: Mapping[str, str]
        'default': 'sdnmc.explore.base:Explorer',
        'pool': 'sdnmc.explore.pool:Explorer',
        'celery': 'sdnmc.explore.celery:Explorer',
    }

    def __init__(self, config=None, explorer=None, set_as_current=True):
        # type: (Any, Union[str, type], bool) -> None
        self._config = config
        self._explorer = explorer
        if set_as_current:
            self.set_current()

    def set_current(self):
        # type: () -> None
        _state.set_current_app(self)

    def set_default(self):
        # type: () -> None
        _state.set_default_app(self)

    def load_scenario(self, name_or_path):
        # type: (str) -> ScenarioFile
        """Load scenario by path or bundled name and validate it."""
        scenario = self.ScenarioFile.load(name_or_path)
        scenario.validate(self.settings.SDNMC_SCENARIO_VALIDATORS)
        return scenario

    def options(self, scenario=None, **overrides):
        # type: (ScenarioFile, **Any) -> ExplorationOptions
        """Resolve exploration options.

        Precedence is keyword overrides, then the scenario's
        ``exploration`` section, then settings.
        """
        return self.ExplorationOptions.resolve(
            self.settings, scenario, **overrides)

    def check(self, scenario, barriers=None, **overrides):
        # type: (ScenarioFile, bool, **Any) -> ExplorationResult
        """Build the initial configuration of a scenario and explore it."""
        options = self.options(scenario, **overrides)
        cfg0 = scenario.build(barriers=barriers, options=options)
        logger.info('Exploring %r with %s/%s',
                    scenario.name, options.mode, options.independence)
        return self.explorer.explore(
            cfg0, options, scenario=scenario, barriers=barriers)

    def crosscheck(self, scenario):
        # type: (ScenarioFile) -> CrosscheckReport
        from .semantics import crosscheck
        return crosscheck(scenario, app=self)

    def _get_explorer(self, explorer=None):
        # type: (Union[str, type]) -> type
        if explorer is None:
            explorer = self.settings.SDNMC_EXPLORER
        return symbol_by_name(explorer, self.explorers)

    @cached_property
    def explorer(self):
        # type: () -> Explorer
        return self.Explorer()

    @cached_property
    def Explorer(self):
        # type: () -> type
        return self.subclass_with_self(self._get_explorer(self._explorer))

    @cached_property
    def config(self):
        # type: () -> Any
        config = self._config
        if config is None or isinstance(config, dict):
            return AttributeDict(config or {})
        return config

    @cached_property
    def Settings(self):
        # type: () -> type
        return self.subclass_with_self(self.settings_cls)

    @cached_property
    def settings(self):
        # type: () -> Settings
        return self.Settings()

    @cached_property
    def ScenarioFile(self):
        # type: () -> type
        return symbol_by_name(self.scenario_cls)

    @cached_property
    def ExplorationOptions(self):
        # type: () -> type
        return symbol_by_name(self.options_cls)

    def subclass_with_self(self, Class,
                           name=None, attribute='app',
                           reverse=None, keep_reduce=False, **kw):
        # type: (type, str, str, str, bool, **Any) -> type
        """Subclass an app-compatible class.

        App-compatible means the class has an 'app' attribute providing
        the default app, e.g.: ``class Foo(object): app = None``.

        Arguments:
            Class (Any): The class to subclass.

        Keyword Arguments:
            name (str): Custom name for the target subclass.
            attribute (str): Name of the attribute holding the app.
                Default is ``"app"``.
            reverse (str): Reverse path to this object used for pickling
                purposes.  E.g. for ``app.Explorer`` use ``"Explorer"``.
            keep_reduce (bool): If enabled a custom ``__reduce__``
                implementation will not be provided.
        """
        Class = symbol_by_name(Class)
        reverse = reverse if reverse else Class.__name__

        def __reduce__(self):
            return _unpickle_appattr, (reverse, self.__reduce_keys__())

        attrs = dict({attribute: self},
                     __module__=Class.__module__,
                     __doc__=Class.__doc__,
                     **kw)
        if not keep_reduce:
            attrs['__reduce__'] = __reduce__

        return type(name or Class.__name__, (Class,), attrs)
