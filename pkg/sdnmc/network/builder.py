"""Initial configuration of a network."""
from sdnmc.actors import (
    ENTRY, Actor, ActorConfig, Staged, Task, behaviors, settle,
)
from sdnmc.exceptions import ImproperlyConfigured, TopologyError
from sdnmc.policies import initial_state
from sdnmc.utils.log import get_logger

from .barriers import BarrierController
from .types import FlowTable

__all__ = ['build_initial_config', 'CONTROLLER_ID']

E_UNKNOWN_HOST = 'Injection names unknown host {0!r}'
E_UNKNOWN_CONTROLLER = 'No controller behavior named {0!r}'

#: The controller is always the first actor.
CONTROLLER_ID = 0

logger = get_logger(__name__)


def build_initial_config(top, policy, injections=(),
                         barriers=False, detect_loops=False,
                         detect_conflicts=False, serial=False,
                         controller=None):
    # type: (Topology, PolicySpec, Sequence[Tuple[str, Packet]], ...) -> ActorConfig
    """Create the actors of a network and queue its packet injections.

    Actor ids are assigned in a fixed order: the controller gets
    :data:`CONTROLLER_ID`, then switches and hosts follow in name order.

    Arguments:
        top (Topology): Network links.
        policy (PolicySpec): Controller policy.
        injections (Sequence[Tuple[str, Packet]]): Packets sent by
            hosts, in order.

    Keyword Arguments:
        barriers (bool): Use the barrier controller.
        detect_loops (bool): Give switches a set of the packets already
            seen, raising a violation when one comes back.
        detect_conflicts (bool): Switches raise a violation on
            contradictory installs.
        serial (bool): Hold back every injection but the first until
            the network is quiet.
        controller (str): Controller behavior kind overriding the
            one selected by ``barriers``.

    Raises:
        ~sdnmc.exceptions.TopologyError: if an injection names a host
            not in the topology.
    """
    kind = controller or (
        BarrierController.kind if barriers else 'Controller')
    switches, hosts = top.switches, top.hosts
    srefs = {s: i for i, s in enumerate(switches, CONTROLLER_ID + 1)}
    hrefs = {h: i for i, h in enumerate(hosts, CONTROLLER_ID + 1 + len(srefs))}
    refs = dict(srefs, **hrefs)

    ctrl_heap = {
        'srefs': srefs,
        'hrefs': hrefs,
        'ntw': top,
        'policy': initial_state(policy),
        'errors': (),
    }
    if kind not in behaviors:
        raise ImproperlyConfigured(E_UNKNOWN_CONTROLLER.format(kind))
    if isinstance(behaviors[kind], BarrierController):
        ctrl_heap.update(barrier_map={}, barrier_on=frozenset())
    actors = {CONTROLLER_ID: Actor(CONTROLLER_ID, kind, ctrl_heap)}

    for name in switches:
        ports = top.ports(name)
        actors[srefs[name]] = Actor(srefs[name], 'Switch', {
            'name': name,
            'ctrl': CONTROLLER_ID,
            'peers': {peer: refs[peer] for peer, _ in ports.values()},
            'ports': ports,
            'flowT': FlowTable(),
            'buffer': {},
            'dropped': (),
            'seen': frozenset() if detect_loops else None,
            'detect_conflicts': detect_conflicts,
        })
    for name in hosts:
        switch, port = top.host_location(name)
        actors[hrefs[name]] = Actor(hrefs[name], 'Host', {
            'name': name,
            'switch': srefs[switch],
            'port': port,
            'delivered': (),
        })

    sends = []
    for host, packet in injections:
        if host not in hrefs:
            raise TopologyError(E_UNKNOWN_HOST.format(host))
        sends.append(Staged(hrefs[host], 'sendIn', {'packet': packet}))

    cfg = ActorConfig(actors, next_task=1, next_actor=len(actors))
    if serial:
        return settle(cfg._replace(staged=tuple(sends)))
    for tid, send in enumerate(sends, cfg.next_task):
        host = actors[send.actor]
        actors[send.actor] = host._replace(queue=host.queue + (
            Task(tid, send.method, dict(send.args), ENTRY, None),))
    logger.debug('initial configuration: %d actors, %d injections',
                 len(actors), len(sends))
    return cfg._replace(actors=actors, next_task=len(sends) + 1)
