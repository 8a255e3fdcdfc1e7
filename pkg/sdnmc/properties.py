"""Property monitors.

A monitor can look at a run in three places:

- online, through violations raised by switch instrumentation while
  a step runs (``loop`` and ``contradictory``).  The monitor only
  selects the instrumentation to build into the network.
- at every final configuration (``safety`` and ``consistency``).
- over the step sequence of every execution (``barrier``).
"""
import networkx as nx

from .actors import Violation, behaviors
from .network.barriers import BarrierController, barrier_invariant_monitor
from .network.types import (
    MatchField, PacketKind, ToHost, ToSwitch,
)

__all__ = [
    'MONITOR_NAMES', 'PropertyMonitor', 'MonitorSet',
    'monitor', 'monitors', 'monitors_for',
    'monitor_forwarding_loop', 'monitor_contradictory_rules',
    'monitor_safety_delivery', 'monitor_flowtable_consistency',
    'monitor_barrier_windows',
    'switches_of', 'controller_of',
]

monitors = {}


def monitor(cls):
    """Class decorator registering a property monitor by name."""
    monitors[cls.name] = cls()
    return cls


def switches_of(cfg):
    return [a for a in sorted(cfg.actors.values(), key=lambda a: a.id)
            if a.kind == 'Switch']


def hosts_of(cfg):
    return [a for a in sorted(cfg.actors.values(), key=lambda a: a.id)
            if a.kind == 'Host']


def controller_of(cfg):
    return cfg.actors[min(cfg.actors)]


class PropertyMonitor:
    """Base class for property monitors.

    Monitors never change configurations: online monitors are built
    into the network by :attr:`instrument`, the others only read.
    """

    name = None

    #: Keyword arguments for the network builder enabling
    #: instrumentation this monitor relies on.
    instrument = {}

    def on_final(self, cfg):
        # type: (ActorConfig) -> List[Violation]
        return []

    def on_execution(self, steps):
        # type: (Sequence[Step]) -> List[Violation]
        return []


@monitor
class monitor_forwarding_loop(PropertyMonitor):
    """A packet reaching a switch more than once."""

    name = 'loop'
    instrument = {'detect_loops': True}


@monitor
class monitor_contradictory_rules(PropertyMonitor):
    """Drop and forward installed for the same entry at equal priority."""

    name = 'contradictory'
    instrument = {'detect_conflicts': True}


@monitor
class monitor_safety_delivery(PropertyMonitor):
    """Delivered packets must satisfy the controller family's policy.

    - SSH families: no SSH packet is delivered.
    - MI families: every delivered packet comes from a trusted host.
    - LE: every delivered packet other than an authentication request
      comes from an authenticated host.
    """

    name = 'safety'

    def on_final(self, cfg):
        ps = controller_of(cfg).heap['policy']
        family = ps.spec.family
        if family.startswith('SSH'):
            check = self.ssh_blocked
        elif family in ('MI', 'MIB'):
            check = self.trusted_source
        elif family == 'LE':
            check = self.authenticated_source
        else:
            return []
        violations = []
        for host in hosts_of(cfg):
            for packet in host.heap['delivered']:
                message = check(ps, packet)
                if message:
                    violations.append(Violation(
                        self.name, host.heap['name'],
                        '{0} delivered: {1}'.format(packet, message)))
        return violations

    def ssh_blocked(self, ps, packet):
        if PacketKind(packet.header.kind) is PacketKind.SSH:
            return 'ssh traffic must be dropped'

    def trusted_source(self, ps, packet):
        if packet.header.src not in ps.trusted:
            return 'source {0} is not trusted'.format(packet.header.src)

    def authenticated_source(self, ps, packet):
        if PacketKind(packet.header.kind) is not PacketKind.AUTH and (
                packet.header.src not in ps.authenticated):
            return 'source {0} is not authenticated'.format(
                packet.header.src)


@monitor
class monitor_flowtable_consistency(PropertyMonitor):
    """Installed rules must follow links and never send a packet in a cycle.

    Every (switch, header, in-port) with an entry is a node, and its
    effective action an edge to the (switch, header, in-port) the packet
    reaches next.
    """

    name = 'consistency'

    def on_final(self, cfg):
        return self.check_switches(
            [(s.heap['name'], s.heap['ports'], s.heap['flowT'])
             for s in switches_of(cfg)])

    def check_switches(self, switches):
        # type: (Sequence[Tuple[str, Mapping, FlowTable]]) -> List[Violation]
        violations = []
        G = nx.DiGraph()
        for name, ports, ft in switches:
            links = set(ports.values())
            for m in ft.matches():
                action = ft.lookup(m)
                node = (name, m.header, m.port)
                G.add_node(node)
                if isinstance(action, ToSwitch):
                    if (action.switch, action.port) not in links:
                        violations.append(Violation(
                            self.name, name,
                            'entry {0} forwards to non-neighbor {1}'.format(
                                m, action)))
                        continue
                    G.add_edge(node, (
                        action.switch, m.header, action.port))
                elif isinstance(action, ToHost):
                    if (action.host, None) not in links:
                        violations.append(Violation(
                            self.name, name,
                            'entry {0} delivers to non-neighbor {1}'.format(
                                m, action)))
        for cycle in sorted(nx.simple_cycles(G), key=repr):
            start = min(cycle)
            violations.append(Violation(
                self.name, start[0],
                'rules for {0} form the cycle {1}'.format(
                    MatchField(start[1], start[2]),
                    ' -> '.join(node[0] for node in cycle))))
        return violations


@monitor
class monitor_barrier_windows(PropertyMonitor):
    """Soundness of barrier windows, checked per execution."""

    name = 'barrier'

    def on_execution(self, steps):
        return barrier_invariant_monitor(steps)


MONITOR_NAMES = tuple(monitors)


class MonitorSet:
    """The monitors attached to one exploration."""

    def __init__(self, names=()):
        self.monitors = [monitors[name] for name in names]
        self.names = tuple(names)

    @property
    def instrument(self):
        options = {}
        for m in self.monitors:
            options.update(m.instrument)
        return options

    def on_final(self, cfg):
        return [v for m in self.monitors for v in m.on_final(cfg)]

    def on_execution(self, steps):
        return [v for m in self.monitors for v in m.on_execution(steps)]

    def __bool__(self):
        return bool(self.monitors)

    def __repr__(self):
        return '<MonitorSet: {0}>'.format(', '.join(self.names) or 'none')


def monitors_for(names=(), cfg=None):
    # type: (Sequence[str], ActorConfig) -> MonitorSet
    """Monitors for the given property names.

    The barrier monitor is always attached when ``cfg`` runs the
    barrier controller.
    """
    names = list(names)
    if cfg is not None and 'barrier' not in names and isinstance(
            behaviors.get(controller_of(cfg).kind), BarrierController):
        names.append('barrier')
    return MonitorSet(names)