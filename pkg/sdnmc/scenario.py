"""Scenario files."""
import os

from collections import namedtuple

from .exceptions import ScenarioError, TopologyError
from .network.builder import build_initial_config
from .network.topology import Topology
from .network.types import Packet, PacketHeader, PacketKind
from .policies import PolicySpec
from .properties import monitors_for
from .utils.json import dumps, loads
from .utils.log import get_logger
from .validators import deserialize_validator

__all__ = ['ScenarioFile', 'Injection', 'SCENARIO_DIR']

E_NOT_FOUND = 'No scenario file or bundled scenario named {0!r}'
E_MISSING = 'Scenario {0!r} is missing required section {1!r}'
E_MALFORMED = 'Scenario {0!r}: malformed {1}: {2}'
E_UNKNOWN_HOST = 'Injection names unknown host {0!r}'

#: Directory of the bundled scenarios.
SCENARIO_DIR = os.path.join(os.path.dirname(__file__), 'scenarios')

logger = get_logger(__name__)

#: ``count`` packets from ``host`` to ``dst``.
Injection = namedtuple('Injection', ('host', 'dst', 'kind', 'count'))


class ScenarioFile:
    """Network, controller, injections and exploration settings.

    Example:
        >>> scenario = ScenarioFile.load('lb_buggy_1pkt')
        >>> cfg0 = scenario.build()
    """

    def __init__(self, name, topology, controller,
                 injections=(), injection='concurrent',
                 exploration=None, properties=()):
        # type: (str, Topology, Dict, Sequence[Injection], str, Dict, Sequence[str]) -> None
        self.name = name
        self.topology = topology
        self.controller = dict(controller)
        self.injections = [Injection(*i) for i in injections]
        self.injection = injection
        self.exploration = dict(exploration or {})
        self.properties = list(properties)

    @classmethod
    def load(cls, name_or_path):
        # type: (str) -> ScenarioFile
        """Load from a path, or from a bundled scenario by name."""
        path = name_or_path
        if not os.path.isfile(path):
            path = os.path.join(SCENARIO_DIR, name_or_path + '.json')
            if not os.path.isfile(path):
                raise ScenarioError(E_NOT_FOUND.format(name_or_path))
        with open(path) as fh:
            return cls.loads(fh.read(), default_name=os.path.splitext(
                os.path.basename(path))[0])

    @classmethod
    def loads(cls, s, default_name='scenario'):
        # type: (str, str) -> ScenarioFile
        try:
            d = loads(s)
        except ValueError as exc:
            raise ScenarioError(
                E_MALFORMED.format(default_name, 'json', exc))
        d.setdefault('name', default_name)
        return cls.from_dict(d)

    @staticmethod
    def list_bundled():
        # type: () -> List[str]
        return sorted(
            os.path.splitext(f)[0] for f in os.listdir(SCENARIO_DIR)
            if f.endswith('.json'))

    @classmethod
    def from_dict(cls, d):
        # type: (Mapping) -> ScenarioFile
        name = d.get('name', 'scenario')
        for section in ('topology', 'controller'):
            if section not in d:
                raise ScenarioError(E_MISSING.format(name, section))
        try:
            topology = Topology.from_dict(d['topology'])
        except (TypeError, ValueError) as exc:
            raise ScenarioError(E_MALFORMED.format(name, 'topology', exc))
        try:
            injections = [
                Injection(i['host'], i['dst'],
                          PacketKind(i.get('kind', 'other')).value,
                          int(i.get('count', 1)))
                for i in d.get('injections', ())
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(E_MALFORMED.format(name, 'injection', exc))
        return cls(
            name, topology, d['controller'],
            injections=injections,
            injection=d.get('injection', 'concurrent'),
            exploration=d.get('exploration'),
            properties=d.get('properties', ()),
        )

    def as_dict(self):
        # type: () -> Dict
        return {
            'name': self.name,
            'topology': self.topology.as_dict(),
            'controller': dict(self.controller),
            'injections': [i._asdict() for i in self.injections],
            'injection': self.injection,
            'exploration': dict(self.exploration),
            'properties': list(self.properties),
        }

    def dumps(self):
        # type: () -> str
        return dumps(self.as_dict(), indent=2, sort_keys=True)

    def validate(self, validators=()):
        # type: (Sequence[Callable]) -> ScenarioFile
        """Run scenario validators.

        Raises:
            ~sdnmc.exceptions.ScenarioError: if the scenario does not
                validate, or names a host that is not in the topology.
        """
        for validator in validators:
            deserialize_validator(validator)(self)
        hosts = set(self.topology.hosts)
        for i in self.injections:
            if i.host not in hosts:
                raise TopologyError(E_UNKNOWN_HOST.format(i.host))
        return self

    @property
    def policy_spec(self):
        # type: () -> PolicySpec
        return PolicySpec.create(
            self.controller['policy'], **self.controller.get('params', {}))

    def uses_barriers(self, barriers=None):
        # type: (bool) -> bool
        """Barrier flag: explicit value, scenario setting, or family default."""
        if barriers is not None:
            return bool(barriers)
        configured = self.controller.get('barriers')
        if configured is not None:
            return bool(configured)
        return self.policy_spec.barriers

    @property
    def serial(self):
        return self.injection == 'serial'

    def packets(self, packet_bound=None):
        # type: (int) -> List[Tuple[str, Packet]]
        """Expand injections into packets with ids 1..N in order.

        Counts above ``packet_bound`` are clipped.
        """
        packets = []
        for i in self.injections:
            count = i.count
            if packet_bound is not None and count > packet_bound:
                logger.warning('%s: clipping %d packets %s->%s to %d',
                               self.name, count, i.host, i.dst, packet_bound)
                count = packet_bound
            header = PacketHeader(i.host, i.dst, PacketKind(i.kind))
            for _ in range(count):
                packets.append((i.host, Packet(len(packets) + 1, header)))
        return packets

    def build(self, barriers=None, options=None, monitors=True):
        # type: (bool, ExplorationOptions, bool) -> ActorConfig
        """Build the initial actor configuration.

        Arguments:
            barriers (bool): Override the controller's barrier setting.
            options (ExplorationOptions): Used for the packet bound.
            monitors (bool): Build the instrumentation the scenario's
                properties need.
        """
        instrument = monitors_for(self.properties).instrument if monitors else {}
        return build_initial_config(
            self.topology, self.policy_spec,
            self.packets(options.packet_bound if options else None),
            barriers=self.uses_barriers(barriers),
            serial=self.serial,
            **instrument)

    def __eq__(self, other):
        if not isinstance(other, ScenarioFile):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return '<{0}: {1} {2}x{3}x{4}>'.format(
            type(self).__name__, self.name,
            len(self.topology.switches), len(self.topology.hosts),
            sum(i.count for i in self.injections))
