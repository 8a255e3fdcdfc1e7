"""Reference network semantics.

A direct rule-based model of the network, independent of the actor
runtime: a state holds the hosts, switches and controller with their
input channels, channels are multisets, and every rule consumes one
channel item.  It only knows the barrier-free controller, and serves
as the oracle the actor model is checked against.

Rules:

=========  =============================================================
``si``     host sends a new packet to its switch
``hhp``    host receives a packet
``shp1``   switch forwards a packet to the next switch
``shp2``   switch forwards a packet to a host
``shp3``   switch buffers a packet and asks the controller
``shpd``   switch drops a packet
``so1``    packet-out forwards a buffered packet to the next switch
``so2``    packet-out forwards a buffered packet to a host
``so3``    packet-out finds no entry and drops the packet
``sod``    packet-out hits a drop entry
``sof``    buffered packet is flooded
``shm``    switch installs an entry
``chm``    controller applies the policy to a packet-in
=========  =============================================================
"""
from collections import Counter, namedtuple

import networkx as nx

from ._state import app_or_default
from .actors import ENTRY, FINISHED
from .exceptions import (
    BarrierScenarioRejected, InstanceTooLarge, InvariantError,
    ProtocolViolation,
)
from .network.types import Flood, FlowTable, ToHost, ToSwitch
from .policies import apply_policy, initial_state as initial_policy_state
from .utils.log import get_logger

__all__ = [
    'NetworkState', 'HostState', 'SwitchState', 'ControllerState',
    'New', 'PortPacket', 'ModState', 'PktOut', 'FloodOut', 'PktIn',
    'initial_state', 'successors', 'enumerate_final_states',
    'equivalent', 'crosscheck', 'CrosscheckReport',
]

E_BARRIERS = (
    'Scenario {0!r} uses the barrier controller, which the reference '
    'semantics does not model')
E_TOO_LARGE = (
    'Scenario {0!r} is too large to cross-check: {1} switches (max {2}), '
    '{3} hosts (max {4}), {5} packets (max {6})')
E_DUPLICATE_BUFFER = 'Packet {0} is already buffered at switch {1!r}'
E_UNKNOWN_PACKET = 'Packet-out of packet {0} unknown to switch {1!r}'

logger = get_logger(__name__)


def _item(name, fields, doc):
    # channel items of different kinds never compare equal.
    base = namedtuple(name, fields)

    def __eq__(self, other):
        return type(self) is type(other) and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((name, tuple(self)))

    return type(name, (base,), {
        '__slots__': (), '__doc__': doc, '__module__': __name__,
        '__eq__': __eq__, '__ne__': __ne__, '__hash__': __hash__,
    })


New = _item('New', ('packet',), 'Packet waiting to be sent by a host.')
PortPacket = _item(
    'PortPacket', ('port', 'packet'), 'Packet arriving at a switch port.')
ModState = _item(
    'ModState', ('match', 'priority', 'action'), 'Flow-table install.')
PktOut = _item('PktOut', ('pid',), 'Send out a buffered packet.')
FloodOut = _item('FloodOut', ('pid',), 'Flood a buffered packet.')
PktIn = _item(
    'PktIn', ('sid', 'port', 'pid', 'header'), 'Table miss report.')

HostState = namedtuple('HostState', (
    'name', 'switch', 'port', 'inbox', 'delivered'))
SwitchState = namedtuple('SwitchState', (
    'name', 'ft', 'buffer', 'inbox', 'dropped'))
ControllerState = namedtuple('ControllerState', ('top', 'policy', 'inbox'))


def _bag(items):
    return tuple(sorted(items, key=repr))


def _add(bag, *items):
    return _bag(bag + items)


def _remove(bag, item):
    i = bag.index(item)
    return bag[:i] + bag[i + 1:]


class NetworkState(namedtuple('NetworkState', (
        'hosts', 'switches', 'controller', 'staged'))):
    """Hosts, switches and controller, each with its input channel.

    ``staged`` holds the injections of a serial scenario not yet
    released, as ``(host, New)`` pairs.
    """

    __slots__ = ()

    def host(self, name):
        # type: (str) -> HostState
        for h in self.hosts:
            if h.name == name:
                return h
        raise KeyError(name)

    def switch(self, name):
        # type: (str) -> SwitchState
        for s in self.switches:
            if s.name == name:
                return s
        raise KeyError(name)

    def replace_host(self, h):
        return self._replace(hosts=tuple(
            h if x.name == h.name else x for x in self.hosts))

    def replace_switch(self, s):
        return self._replace(switches=tuple(
            s if x.name == s.name else x for x in self.switches))

    def send_switch(self, name, *items):
        s = self.switch(name)
        return self.replace_switch(s._replace(inbox=_add(s.inbox, *items)))

    def send_host(self, name, *items):
        h = self.host(name)
        return self.replace_host(h._replace(inbox=_add(h.inbox, *items)))

    def send_controller(self, *items):
        c = self.controller
        return self._replace(controller=c._replace(
            inbox=_add(c.inbox, *items)))

    @property
    def quiet(self):
        # type: () -> bool
        return not self.controller.inbox and not any(
            x.inbox for x in self.hosts + self.switches)

    def release(self):
        """Release the next staged injection once every channel is empty."""
        if not self.staged or not self.quiet:
            return self
        (host, item), rest = self.staged[0], self.staged[1:]
        return self._replace(staged=rest).send_host(host, item)


def initial_state(top, policy, injections=(), serial=False):
    # type: (Topology, PolicySpec, Sequence[Tuple[str, Packet]], bool) -> NetworkState
    """Network state before any rule applies."""
    hosts = []
    for name in top.hosts:
        switch, port = top.host_location(name)
        hosts.append(HostState(name, switch, port, (), ()))
    st = NetworkState(
        tuple(hosts),
        tuple(SwitchState(name, FlowTable(), (), (), ())
              for name in top.switches),
        ControllerState(top, initial_policy_state(policy), ()),
        (),
    )
    sends = [(host, New(packet)) for host, packet in injections]
    if serial:
        return st._replace(staged=tuple(sends)).release()
    for host, item in sends:
        st = st.send_host(host, item)
    return st


def _deliver(st, at, packet, action, rule_fwd, rule_host, rule_drop):
    if isinstance(action, ToSwitch):
        return rule_fwd, st.send_switch(
            action.switch, PortPacket(action.port, packet))
    if isinstance(action, ToHost):
        return rule_host, st.send_host(action.host, packet)
    s = st.switch(at)
    return rule_drop, st.replace_switch(s._replace(
        dropped=tuple(sorted(s.dropped + (packet.id,)))))


def successors(st):
    # type: (NetworkState) -> Set[Tuple[str, NetworkState]]
    """Every state one rule application away, tagged with the rule."""
    out = set()
    for h in st.hosts:
        for item in set(h.inbox):
            base = st.replace_host(h._replace(inbox=_remove(h.inbox, item)))
            if isinstance(item, New):
                out.add(('si', base.send_switch(
                    h.switch, PortPacket(h.port, item.packet)).release()))
            else:
                h2 = base.host(h.name)
                out.add(('hhp', base.replace_host(h2._replace(
                    delivered=tuple(sorted(h2.delivered + (item,)))
                )).release()))
    for s in st.switches:
        for item in set(s.inbox):
            base = st.replace_switch(s._replace(inbox=_remove(s.inbox, item)))
            rule, nxt = _switch_rule(base, base.switch(s.name), item)
            out.add((rule, nxt.release()))
    c = st.controller
    for item in set(c.inbox):
        base = st._replace(controller=c._replace(
            inbox=_remove(c.inbox, item)))
        out.add(('chm', _controller_rule(base, item).release()))
    return out


def _switch_rule(st, s, item):
    if isinstance(item, PortPacket):
        packet, port = item.packet, item.port
        action = s.ft.lookup((packet.header, port))
        if action is None:
            if any(pid == packet.id for pid, _, _ in s.buffer):
                raise InvariantError(
                    E_DUPLICATE_BUFFER.format(packet.id, s.name))
            st = st.replace_switch(s._replace(
                buffer=_add(s.buffer, (packet.id, packet, port))))
            return 'shp3', st.send_controller(
                PktIn(s.name, port, packet.id, packet.header))
        return _deliver(st, s.name, packet, action, 'shp1', 'shp2', 'shpd')
    if isinstance(item, ModState):
        return 'shm', st.replace_switch(s._replace(
            ft=s.ft.put(item.match, item.priority, item.action)))
    for entry in s.buffer:
        if entry[0] == item.pid:
            break
    else:
        raise ProtocolViolation(E_UNKNOWN_PACKET.format(item.pid, s.name))
    _, packet, port = entry
    st = st.replace_switch(s._replace(buffer=_remove(s.buffer, entry)))
    if isinstance(item, FloodOut):
        top = st.controller.top
        for out_port, (name, peer_port) in sorted(top.ports(s.name).items()):
            if out_port == port:
                continue
            if peer_port is None:
                st = st.send_host(name, packet)
            else:
                st = st.send_switch(name, PortPacket(peer_port, packet))
        return 'sof', st
    action = s.ft.lookup((packet.header, port))
    if action is None:
        return _deliver(st, s.name, packet, None, 'so1', 'so2', 'so3')
    return _deliver(st, s.name, packet, action, 'so1', 'so2', 'sod')


def _controller_rule(st, item):
    c = st.controller
    decision, policy = apply_policy(
        c.policy, c.top, item.sid, item.port, item.header)
    st = st._replace(controller=c._replace(policy=policy))
    flood = False
    for d in decision:
        if isinstance(d, Flood):
            flood = True
            continue
        st = st.send_switch(d.switch, ModState(d.match, d.priority, d.action))
    return st.send_switch(
        item.sid, FloodOut(item.pid) if flood else PktOut(item.pid))


def enumerate_final_states(st, step_bound):
    # type: (NetworkState, int) -> Tuple[Set[NetworkState], bool]
    """All final states reachable in at most ``step_bound`` rule steps.

    Returns:
        Tuple: the set of final states, and whether some derivation
            was cut off by the bound.
    """
    memo = {}

    def walk(state, budget):
        key = (state, budget)
        try:
            return memo[key]
        except KeyError:
            pass
        nexts = successors(state)
        if not nexts:
            value = frozenset({state}), False
        elif not budget:
            value = frozenset(), True
        else:
            finals, exhausted = set(), False
            for _, nxt in nexts:
                f, e = walk(nxt, budget - 1)
                finals |= f
                exhausted = exhausted or e
            value = frozenset(finals), exhausted
        memo[key] = value
        return value

    finals, exhausted = walk(st, step_bound)
    if exhausted:
        logger.info('step bound %d reached on some derivations', step_bound)
    return set(finals), exhausted


def _task_item(kind, task):
    l = task.locals
    if kind == 'Host':
        if task.method == 'sendIn':
            return New(l['packet'])
        return l['packet']
    if kind == 'Switch':
        return {
            'switchHandlePacket': lambda: PortPacket(l['port'], l['packet']),
            'switchHandleMessage': lambda: ModState(
                l['match'], l['priority'], l['action']),
            'sendOut': lambda: PktOut(l['pid']),
            'flood': lambda: FloodOut(l['pid']),
        }[task.method]()
    return PktIn(l['sid'], l['port'], l['pid'], l['header'])


def _pending(actor):
    items = []
    for task in actor.queue:
        if task.point == FINISHED:
            continue
        if task.point != ENTRY:
            return None
        items.append(_task_item(actor.kind, task))
    return Counter(items)


def equivalent(st, cfg):
    # type: (NetworkState, ActorConfig) -> bool
    """Return true if a network state and an actor configuration agree.

    Components must match by name, every channel item must correspond
    to exactly one pending task (and vice versa), and flow tables,
    buffers, logs and the controller's policy state must be equal.
    """
    actors = sorted(cfg.actors.values(), key=lambda a: a.id)
    ctrl = actors[0]
    c = st.controller
    heap = ctrl.heap
    if (set(heap['srefs']) != {s.name for s in st.switches} or
            set(heap['hrefs']) != {h.name for h in st.hosts} or
            heap['ntw'] != c.top or heap['policy'] != c.policy or
            _pending(ctrl) != Counter(c.inbox)):
        return False
    names = {aid: name for name, aid in heap['hrefs'].items()}
    for actor in actors[1:]:
        name = actor.heap['name']
        pending = _pending(actor)
        try:
            if actor.kind == 'Host':
                h = st.host(name)
                if (pending != Counter(h.inbox) or
                        actor.heap['delivered'] != h.delivered):
                    return False
            elif actor.kind == 'Switch':
                s = st.switch(name)
                buffer = {
                    (pid, packet, port)
                    for pid, (packet, port) in actor.heap['buffer'].items()}
                if (pending != Counter(s.inbox) or
                        actor.heap['flowT'] != s.ft or
                        buffer != set(s.buffer) or
                        actor.heap['dropped'] != s.dropped):
                    return False
            else:
                return False
        except KeyError:
            return False
    staged = tuple(
        (names.get(x.actor), New(x.args['packet'])) for x in cfg.staged)
    return staged == st.staged


#: Outcome of :func:`crosscheck`.
CrosscheckReport = namedtuple('CrosscheckReport', (
    'scenario', 'matched', 'oracle_finals', 'actor_finals',
    'unmatched_oracle', 'unmatched_actor', 'step_bound',
    'oracle_exhausted', 'actor_truncated',
))


def crosscheck(scenario, app=None):
    # type: (ScenarioFile, Checker) -> CrosscheckReport
    """Compare the final states of the reference semantics and the actor model.

    Both sides are enumerated without reduction or instrumentation
    under the same step bound, and the final states must admit a
    perfect matching under :func:`equivalent`.

    Raises:
        ~sdnmc.exceptions.BarrierScenarioRejected: for scenarios using
            the barrier controller.
        ~sdnmc.exceptions.InstanceTooLarge: if the scenario exceeds the
            cross-check size guard.
    """
    from .explore.base import ExplorationOptions, enumerate_all
    app = app_or_default(app)
    settings = app.settings
    if scenario.uses_barriers():
        raise BarrierScenarioRejected(E_BARRIERS.format(scenario.name))
    top = scenario.topology
    packets = scenario.packets(settings.SDNMC_PACKET_BOUND)
    limits = (settings.SDNMC_CROSSCHECK_MAX_SWITCHES,
              settings.SDNMC_CROSSCHECK_MAX_HOSTS,
              settings.SDNMC_CROSSCHECK_MAX_PACKETS)
    sizes = (len(top.switches), len(top.hosts), len(packets))
    if any(size > limit for size, limit in zip(sizes, limits)):
        raise InstanceTooLarge(E_TOO_LARGE.format(
            scenario.name, sizes[0], limits[0], sizes[1], limits[1],
            sizes[2], limits[2]))
    bound = max(1, settings.SDNMC_STEP_BOUND_FACTOR * max(
        1, len(packets)) * max(1, len(top.switches)))

    st0 = initial_state(top, scenario.policy_spec, packets,
                        serial=scenario.serial)
    oracle, exhausted = enumerate_final_states(st0, bound)

    cfg0 = scenario.build(barriers=False, monitors=False)
    actor = enumerate_all(
        cfg0, ExplorationOptions(max_depth=bound), collect=True, app=app)
    configs = actor.final_configs

    G = nx.Graph()
    left = [('oracle', i) for i in range(len(oracle))]
    G.add_nodes_from(left, bipartite=0)
    G.add_nodes_from((('actor', fp) for fp in configs), bipartite=1)
    for i, st in enumerate(sorted(oracle, key=repr)):
        for fp, cfg in configs.items():
            if equivalent(st, cfg):
                G.add_edge(('oracle', i), ('actor', fp))
    matching = nx.bipartite.maximum_matching(G, top_nodes=left)
    pairs = len(matching) // 2
    report = CrosscheckReport(
        scenario=scenario.name,
        matched=pairs == len(oracle) == len(configs),
        oracle_finals=len(oracle),
        actor_finals=len(configs),
        unmatched_oracle=len(oracle) - pairs,
        unmatched_actor=len(configs) - pairs,
        step_bound=bound,
        oracle_exhausted=exhausted,
        actor_truncated=actor.truncated,
    )
    logger.info('crosscheck %s: %s', scenario.name,
                'MATCH' if report.matched else 'MISMATCH')
    return report
