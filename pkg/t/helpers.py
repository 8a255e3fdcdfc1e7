"""Builders shared by the unit tests."""
from sdnmc import ScenarioFile
from sdnmc.network.topology import Topology
from sdnmc.network.types import Packet, PacketHeader, PacketKind
from sdnmc.policies import PolicySpec

#: The three-switch load balancer network used throughout the tests.
LB_HOSTS = [('S1', 'H0', 0), ('S2', 'R1', 0), ('S3', 'R2', 0)]
LB_LINKS = [('S1', 1, 'S2', 1), ('S1', 2, 'S3', 1)]
LB_PARAMS = {'replicas': ['R1', 'R2'], 'vip': 'VIP'}

#: One switch, A on port 1, B on port 2, C on port 3.
MI_HOSTS = [('S1', 'A', 1), ('S1', 'B', 2), ('S1', 'C', 3)]

#: Two switches in a row, A behind S1 and B behind S2.
PAIR_HOSTS = [('S1', 'A', 0), ('S2', 'B', 0)]
PAIR_LINKS = [('S1', 1, 'S2', 1)]

#: S1 - S2 - S3 with A, B, C behind them.
LINE_HOSTS = [('S1', 'A', 0), ('S2', 'B', 0), ('S3', 'C', 0)]
LINE_LINKS = [('S1', 1, 'S2', 1), ('S2', 2, 'S3', 1)]


def lb_topology():
    return Topology(LB_HOSTS, LB_LINKS)


def lb_spec(family='LB'):
    return PolicySpec.create(family, **LB_PARAMS)


def packet(id, src, dst, kind=PacketKind.OTHER):
    return Packet(id, PacketHeader(src, dst, kind))


def scenario(name='test', hosts=LB_HOSTS, links=LB_LINKS,
             policy='LB', params=LB_PARAMS, injections=(('H0', 'VIP'),),
             barriers=None, injection='concurrent', properties=(),
             exploration=None):
    controller = {'policy': policy, 'params': dict(params or {})}
    if barriers is not None:
        controller['barriers'] = barriers
    return ScenarioFile.from_dict({
        'name': name,
        'topology': {'hosts': [list(h) for h in hosts],
                     'links': [list(l) for l in links]},
        'controller': controller,
        'injections': [
            dict(zip(('host', 'dst', 'kind', 'count'), i))
            for i in injections
        ],
        'injection': injection,
        'exploration': exploration or {},
        'properties': list(properties),
    })


SSH = PacketKind.SSH.value
AUTH = PacketKind.AUTH.value
OTHER = PacketKind.OTHER.value


#: Barrier-free networks small enough for exhaustive comparison.
SMALL_SCENARIOS = {
    'lb_vip': {},
    'lb_replica_local': {'injections': [('R1', 'VIP')]},
    'lb_plain': {'injections': [('H0', 'R2')]},
    'ssh_buggy': {
        'hosts': PAIR_HOSTS, 'links': PAIR_LINKS,
        'policy': 'SSH_BUGGY', 'params': {},
        'injections': [('A', 'B', SSH)]},
    'ssh_correct': {
        'hosts': PAIR_HOSTS, 'links': PAIR_LINKS,
        'policy': 'SSH_CORRECT', 'params': {},
        'injections': [('A', 'B', SSH)]},
    'ssh_both_ways': {
        'hosts': PAIR_HOSTS, 'links': PAIR_LINKS,
        'policy': 'SSH_CORRECT', 'params': {},
        'injections': [('A', 'B', OTHER), ('B', 'A', OTHER)]},
    'le_flood': {
        'hosts': LINE_HOSTS, 'links': LINE_LINKS,
        'policy': 'LE', 'params': {},
        'injections': [('A', 'C', AUTH)]},
    'le_serial': {
        'hosts': LINE_HOSTS, 'links': LINE_LINKS,
        'policy': 'LE', 'params': {}, 'injection': 'serial',
        'injections': [('A', 'C', AUTH), ('A', 'C', OTHER)]},
    'mi': {
        'hosts': MI_HOSTS, 'links': (),
        'policy': 'MI', 'params': {'trusted_port': 1},
        'injections': [('A', 'C'), ('B', 'C')]},
    'mib': {
        'hosts': MI_HOSTS, 'links': (),
        'policy': 'MIB', 'params': {'trusted_port': 1},
        'injections': [('A', 'C'), ('B', 'C')]},
    'mi_serial': {
        'hosts': MI_HOSTS, 'links': (),
        'policy': 'MI', 'params': {'trusted_port': 1},
        'injection': 'serial',
        'injections': [('B', 'C'), ('A', 'C')]},
}


def small_scenario(name, **overrides):
    return scenario(name, **dict(SMALL_SCENARIOS[name], **overrides))
