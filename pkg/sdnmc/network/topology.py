"""Network topology."""
from collections import namedtuple
from functools import lru_cache

import networkx as nx

from sdnmc.exceptions import TopologyError

__all__ = ['HostLink', 'SwitchLink', 'Topology']

E_PORT_CONFLICT = 'Port {1} of switch {0!r} is used by more than one link'
E_HOST_CONFLICT = 'Host {0!r} is connected more than once'
E_SELF_LINK = 'Switch {0!r} is linked to itself'
E_NAME_CONFLICT = 'Name {0!r} is used for both a switch and a host'
E_UNKNOWN_HOST = 'Unknown host {0!r}'
E_UNKNOWN_SWITCH = 'Unknown switch {0!r}'

#: Switch ``switch`` reaches host ``host`` through ``port``.
HostLink = namedtuple('HostLink', ('switch', 'host', 'port'))

#: Port ``p1`` of ``s1`` is wired to port ``p2`` of ``s2``.
SwitchLink = namedtuple('SwitchLink', ('s1', 'p1', 's2', 'p2'))


class Topology(namedtuple('Topology', ('sh_links', 'ss_links'))):
    """Switch-host and switch-switch links.

    Switch links are stored once and used in both directions.

    Raises:
        ~sdnmc.exceptions.TopologyError: if a switch port takes part
            in more than one link.
    """

    __slots__ = ()

    def __new__(cls, sh_links=(), ss_links=()):
        self = super().__new__(
            cls,
            frozenset(HostLink(*link) for link in sh_links),
            frozenset(SwitchLink(*link) for link in ss_links),
        )
        self._validate()
        return self

    def _validate(self):
        used = set()

        def claim(switch, port):
            if (switch, port) in used:
                raise TopologyError(E_PORT_CONFLICT.format(switch, port))
            used.add((switch, port))

        hosts = set()
        for link in sorted(self.sh_links):
            claim(link.switch, link.port)
            if link.host in hosts:
                raise TopologyError(E_HOST_CONFLICT.format(link.host))
            hosts.add(link.host)
        for link in sorted(self.ss_links):
            if link.s1 == link.s2:
                raise TopologyError(E_SELF_LINK.format(link.s1))
            claim(link.s1, link.p1)
            claim(link.s2, link.p2)
        for name in hosts & set(self.switches):
            raise TopologyError(E_NAME_CONFLICT.format(name))

    @property
    def switches(self):
        # type: () -> List[str]
        names = {link.switch for link in self.sh_links}
        for link in self.ss_links:
            names.update((link.s1, link.s2))
        return sorted(names)

    @property
    def hosts(self):
        # type: () -> List[str]
        return sorted(link.host for link in self.sh_links)

    def host_location(self, host):
        # type: (str) -> Tuple[str, int]
        for link in self.sh_links:
            if link.host == host:
                return link.switch, link.port
        raise TopologyError(E_UNKNOWN_HOST.format(host))

    def ports(self, switch):
        # type: (str) -> Dict[int, Tuple[str, Optional[int]]]
        """Map each port of ``switch`` to (neighbor, neighbor port).

        The neighbor port is :const:`None` for hosts.
        """
        if switch not in self.switches:
            raise TopologyError(E_UNKNOWN_SWITCH.format(switch))
        ports = {}
        for link in self.sh_links:
            if link.switch == switch:
                ports[link.port] = (link.host, None)
        for link in self.ss_links:
            if link.s1 == switch:
                ports[link.p1] = (link.s2, link.p2)
            if link.s2 == switch:
                ports[link.p2] = (link.s1, link.p1)
        return ports

    def neighbors(self, switch):
        # type: (str) -> List[str]
        return sorted(name for name, _ in self.ports(switch).values())

    def is_host(self, name):
        return any(link.host == name for link in self.sh_links)

    def graph(self):
        # type: () -> networkx.Graph
        """Undirected graph of switches and hosts with port attributes."""
        return _graph(self)

    def as_dict(self):
        return {
            'hosts': [list(link) for link in sorted(self.sh_links)],
            'links': [list(link) for link in sorted(self.ss_links)],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d.get('hosts', ()), d.get('links', ()))


@lru_cache(maxsize=64)
def _graph(top):
    G = nx.Graph()
    G.add_nodes_from(top.switches, kind='switch')
    for link in top.sh_links:
        G.add_node(link.host, kind='host')
        G.add_edge(link.switch, link.host,
                   ports={link.switch: link.port, link.host: None})
    for link in top.ss_links:
        G.add_edge(link.s1, link.s2,
                   ports={link.s1: link.p1, link.s2: link.p2})
    return G
