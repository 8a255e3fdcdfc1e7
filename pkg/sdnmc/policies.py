"""Controller policies.

Every policy is a pure function from the controller's policy state and
a packet-in event to a list of :class:`~sdnmc.network.types.Directive`
and the next policy state.  The same functions drive both the actor
controller and the reference semantics.
"""
from collections import namedtuple

import networkx as nx

from .exceptions import ImproperlyConfigured
from .network.types import (
    DROP, FLOOD, Directive, MatchField, PacketKind, ToHost, ToSwitch,
)

__all__ = [
    'FAMILIES', 'BARRIER_FAMILIES', 'PolicySpec', 'PolicyState', 'Hop',
    'apply_policy', 'initial_state', 'shortest_path', 'policy',
]

E_UNKNOWN_FAMILY = 'Unknown policy family {0!r}'
E_NO_REPLICAS = 'Load balancer policy needs at least one replica'

FAMILIES = (
    'LB', 'LBB', 'SSH_BUGGY', 'SSH_CORRECT', 'SSHB', 'LE', 'MI', 'MIB',
)

#: Families run by the barrier controller unless told otherwise.
BARRIER_FAMILIES = frozenset({'LBB', 'SSHB'})

#: Hop of a path: at ``switch`` apply ``action``.
Hop = namedtuple('Hop', ('switch', 'action'))

policies = {}


def _freeze(value):
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    return value


class PolicySpec(namedtuple('PolicySpec', ('family', 'params'))):
    """Policy family and its parameters.

    Example:
        >>> PolicySpec.create('LB', replicas=['R1', 'R2'], vip='VIP')
    """

    __slots__ = ()

    @classmethod
    def create(cls, family, **params):
        family = family.upper()
        if family not in FAMILIES:
            raise ImproperlyConfigured(E_UNKNOWN_FAMILY.format(family))
        return cls(family, tuple(sorted(
            (k, _freeze(v)) for k, v in params.items())))

    def get(self, name, default=None):
        return dict(self.params).get(name, default)

    @property
    def barriers(self):
        return self.family in BARRIER_FAMILIES

    def as_dict(self):
        return {'policy': self.family, 'params': {
            k: list(v) if isinstance(v, tuple) else v
            for k, v in self.params
        }}


PolicyState = namedtuple('PolicyState', (
    'spec', 'counter', 'learned', 'authenticated', 'trusted',
))
PolicyState.__new__.__defaults__ = (0, (), frozenset(), frozenset())
PolicyState.__json__ = lambda ps: {
    'family': ps.spec.family,
    'counter': ps.counter,
    'learned': [list(entry) for entry in ps.learned],
    'authenticated': sorted(ps.authenticated),
    'trusted': sorted(ps.trusted),
}


def initial_state(spec):
    # type: (PolicySpec) -> PolicyState
    if spec.family in ('LB', 'LBB') and not spec.get('replicas'):
        raise ImproperlyConfigured(E_NO_REPLICAS)
    return PolicyState(spec)


def policy(*families):
    """Register policy function for one or more families."""
    def _inner(fun):
        for family in families:
            policies[family] = fun
        return fun
    return _inner


def apply_policy(ps, top, sid, o, ph):
    # type: (PolicyState, Topology, str, int, PacketHeader) -> Tuple[List[Directive], PolicyState]
    """Decide the rules to install for a packet-in from ``sid`` on port ``o``.

    Returns:
        Tuple: the directives in installation order, and the next
            policy state.  A directive list containing
            :data:`~sdnmc.network.types.FLOOD` asks for the buffered
            packet to be flooded instead of sent out.
    """
    try:
        fun = policies[ps.spec.family]
    except KeyError:
        raise ImproperlyConfigured(E_UNKNOWN_FAMILY.format(ps.spec.family))
    directives, ps2 = fun(ps, top, sid, o, ph)
    return list(directives), ps2


def shortest_path(top, source, host):
    # type: (Topology, str, str) -> Optional[List[Hop]]
    """Shortest hop sequence from switch ``source`` to ``host``.

    Among several shortest paths, the one whose node names sort first
    wins.  Returns :const:`None` if the host cannot be reached.
    """
    G = top.graph()
    if source not in G or host not in G:
        return None
    try:
        best = min(nx.all_shortest_paths(G, source, host))
    except nx.NetworkXNoPath:
        return None
    hops = []
    for node, nxt in zip(best, best[1:]):
        if G.nodes[nxt].get('kind') == 'host':
            hops.append(Hop(node, ToHost(nxt)))
        else:
            hops.append(Hop(node, ToSwitch(nxt, G.edges[node, nxt]['ports'][nxt])))
    return hops


def path_directives(hops, o, ph, priority=0):
    # type: (List[Hop], int, PacketHeader, int) -> List[Directive]
    """One exact-match rule per hop, matching the port the packet enters by."""
    directives, port = [], o
    for hop in hops or ():
        directives.append(
            Directive(hop.switch, MatchField(ph, port), priority, hop.action))
        if isinstance(hop.action, ToSwitch):
            port = hop.action.port
    return directives


def _forward(top, sid, o, ph):
    if not top.is_host(ph.dst):
        return []
    return path_directives(shortest_path(top, sid, ph.dst), o, ph)


@policy('LB', 'LBB')
def load_balancer(ps, top, sid, o, ph):
    """Round-robin over replicas, installing rules along the whole path."""
    vip = ps.spec.get('vip')
    if vip is not None and ph.dst != vip:
        return _forward(top, sid, o, ph), ps
    replicas = ps.spec.get('replicas')
    replica = replicas[ps.counter % len(replicas)]
    ps2 = ps._replace(counter=(ps.counter + 1) % len(replicas))
    return path_directives(shortest_path(top, sid, replica), o, ph), ps2


@policy('SSH_BUGGY', 'SSH_CORRECT', 'SSHB')
def ssh_filter(ps, top, sid, o, ph):
    """Forward everything, dropping SSH traffic at its first switch.

    The buggy variant installs the drop rule with the same priority
    as the forwarding rule.
    """
    directives = _forward(top, sid, o, ph)
    if PacketKind(ph.kind) is PacketKind.SSH:
        priority = 0 if ps.spec.family == 'SSH_BUGGY' else 1
        directives.append(Directive(sid, MatchField(ph, o), priority, DROP))
    return directives, ps


@policy('LE')
def learning_authenticator(ps, top, sid, o, ph):
    """Learning switch that only forwards for authenticated sources."""
    learned = dict((h, (s, p)) for h, s, p in ps.learned)
    if ph.src not in learned:
        learned[ph.src] = (sid, o)
    authenticated = ps.authenticated
    if PacketKind(ph.kind) is PacketKind.AUTH:
        authenticated = authenticated | {ph.src}
    ps2 = ps._replace(
        learned=tuple(sorted((h, s, p) for h, (s, p) in learned.items())),
        authenticated=authenticated,
    )
    if ph.src not in authenticated:
        return [], ps2
    if ph.dst in learned and top.is_host(ph.dst):
        return _forward(top, sid, o, ph), ps2
    return [FLOOD], ps2


@policy('MI', 'MIB')
def migration(ps, top, sid, o, ph):
    """Trust hosts seen on the trusted port, forward for trusted sources.

    The MIB variant skips the check for events arriving on port 2.
    """
    trusted_port = ps.spec.get('trusted_port', 1)
    if o == trusted_port:
        ps = ps._replace(trusted=ps.trusted | {ph.src, ph.dst})
        return _forward(top, sid, o, ph), ps
    if ps.spec.family == 'MIB' and o == 2:
        return _forward(top, sid, o, ph), ps
    if ph.src in ps.trusted:
        return _forward(top, sid, o, ph), ps
    return [], ps
