import pytest

from sdnmc.exceptions import ScenarioError, TopologyError
from sdnmc.explore.base import ExplorationOptions
from sdnmc.network.types import PacketKind
from sdnmc.scenario import Injection, ScenarioFile
from sdnmc.utils.json import dumps

from t.helpers import AUTH, OTHER, PAIR_HOSTS, PAIR_LINKS, scenario

BUNDLED = [
    'lb_buggy_1pkt', 'lb_buggy_2pkt', 'lbb_10h', 'lbb_1pkt', 'lbb_6h',
    'lbb_8h', 'le_3x3', 'mi', 'mib', 'ssh_buggy', 'ssh_correct', 'sshb',
]


def test_list_bundled():
    assert ScenarioFile.list_bundled() == BUNDLED


@pytest.mark.parametrize('name', BUNDLED)
def test_bundled_scenarios_validate(name, app):
    sc = app.load_scenario(name)
    assert sc.name == name
    assert sc.build().actors


class test_load:

    def test_by_name(self):
        sc = ScenarioFile.load('lb_buggy_1pkt')
        assert sc.controller['policy'] == 'LB'
        assert sc.injections == [Injection('H0', 'VIP', OTHER, 1)]
        assert sc.properties == ['loop']
        assert sc.exploration == {'mode': 'full', 'independence': 'actor'}

    def test_by_path(self, tmp_path):
        path = tmp_path / 'custom.json'
        path.write_text(scenario().dumps())
        sc = ScenarioFile.load(str(path))
        assert sc.name == 'test'

    def test_default_name_from_path(self, tmp_path):
        d = scenario().as_dict()
        d.pop('name')
        path = tmp_path / 'unnamed.json'
        path.write_text(dumps(d))
        assert ScenarioFile.load(str(path)).name == 'unnamed'

    def test_not_found(self):
        with pytest.raises(ScenarioError):
            ScenarioFile.load('no_such_scenario')

    def test_malformed_json(self):
        with pytest.raises(ScenarioError):
            ScenarioFile.loads('{"topology": ')


class test_from_dict:

    def test_missing_section(self):
        with pytest.raises(ScenarioError):
            ScenarioFile.from_dict({'topology': {}})
        with pytest.raises(ScenarioError):
            ScenarioFile.from_dict({'controller': {'policy': 'LB'}})

    def test_bad_topology(self):
        with pytest.raises(TopologyError):
            ScenarioFile.from_dict({
                'topology': {'hosts': [['S1', 'A', 1], ['S1', 'B', 1]]},
                'controller': {'policy': 'MI'},
            })
        with pytest.raises(ScenarioError):
            ScenarioFile.from_dict({
                'topology': {'hosts': [['S1', 'A']]},
                'controller': {'policy': 'MI'},
            })

    def test_bad_injection(self):
        with pytest.raises(ScenarioError):
            scenario(injections=[('H0', 'VIP', 'telnet')])
        with pytest.raises(ScenarioError):
            ScenarioFile.from_dict(dict(
                scenario().as_dict(), injections=[{'dst': 'VIP'}]))

    def test_defaults(self):
        sc = ScenarioFile.from_dict({
            'topology': {'hosts': PAIR_HOSTS, 'links': PAIR_LINKS},
            'controller': {'policy': 'SSH_BUGGY'},
            'injections': [{'host': 'A', 'dst': 'B'}],
        })
        assert sc.name == 'scenario'
        assert sc.injection == 'concurrent'
        assert sc.injections == [Injection('A', 'B', OTHER, 1)]
        assert sc.properties == []
        assert sc.exploration == {}

    def test_as_dict(self):
        sc = scenario()
        assert ScenarioFile.from_dict(sc.as_dict()) == sc
        assert ScenarioFile.loads(sc.dumps()) == sc
        assert sc != scenario(injection='serial')
        assert sc != object()


class test_validate:

    def test_unknown_injection_host(self, app):
        sc = scenario(injections=[('H9', 'VIP')])
        with pytest.raises(TopologyError):
            sc.validate()

    def test_default_validators(self, app):
        with pytest.raises(ScenarioError):
            scenario(policy='NAT').validate(
                app.settings.SDNMC_SCENARIO_VALIDATORS)
        with pytest.raises(ScenarioError):
            scenario(properties=['liveness']).validate(
                app.settings.SDNMC_SCENARIO_VALIDATORS)
        with pytest.raises(ScenarioError):
            scenario(injection='random').validate(
                app.settings.SDNMC_SCENARIO_VALIDATORS)
        with pytest.raises(ScenarioError):
            scenario(injections=[('H0', 'VIP', OTHER, 65)]).validate(
                app.settings.SDNMC_SCENARIO_VALIDATORS)
        scenario(injections=[('H0', 'VIP', OTHER, 64)]).validate(
            app.settings.SDNMC_SCENARIO_VALIDATORS)

    def test_serialized_validators(self):
        sc = scenario(injections=[('H0', 'VIP', OTHER, 3)])
        sc.validate([['limit_packets', [3]]])
        with pytest.raises(ScenarioError):
            sc.validate([['limit_packets', [2]]])


class test_packets:

    def test_ids_in_order(self):
        sc = scenario(injections=[('H0', 'VIP', OTHER, 2), ('R2', 'R1', AUTH)])
        packets = sc.packets()
        assert [p.id for _, p in packets] == [1, 2, 3]
        assert [h for h, _ in packets] == ['H0', 'H0', 'R2']
        assert packets[2][1].header.kind == PacketKind.AUTH
        assert packets[2][1].header.dst == 'R1'

    def test_packet_bound(self):
        sc = scenario(injections=[('H0', 'VIP', OTHER, 5), ('R2', 'R1')])
        packets = sc.packets(packet_bound=2)
        assert [p.id for _, p in packets] == [1, 2, 3]


class test_build:

    def test_barriers(self):
        assert not scenario().uses_barriers()
        assert scenario(policy='LBB').uses_barriers()
        assert not scenario(policy='LBB', barriers=False).uses_barriers()
        assert scenario(barriers=True).uses_barriers()
        assert scenario().uses_barriers(True)
        assert not scenario(barriers=True).uses_barriers(False)

    def test_controller_kind(self):
        assert scenario().build().actors[0].kind == 'Controller'
        assert scenario().build(
            barriers=True).actors[0].kind == 'BarrierController'

    def test_instrumentation(self):
        sc = scenario(properties=['loop'])
        assert sc.build().actors[1].heap['seen'] == frozenset()
        assert sc.build(monitors=False).actors[1].heap['seen'] is None

    def test_options_packet_bound(self):
        sc = scenario(injections=[('H0', 'VIP', OTHER, 3)])
        cfg = sc.build(options=ExplorationOptions(packet_bound=1))
        h0 = cfg.actors[4]
        assert len(h0.queue) == 1

    def test_serial(self):
        sc = scenario(
            injection='serial', injections=[('H0', 'VIP'), ('R2', 'VIP')])
        assert sc.serial
        assert len(sc.build().staged) == 1


def test_repr():
    assert repr(scenario('lb', injections=[('H0', 'VIP', OTHER, 2)])) == (
        '<ScenarioFile: lb 3x3x2>')
