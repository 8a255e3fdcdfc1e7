import pytest

from sdnmc.exceptions import (
    BarrierScenarioRejected, InstanceTooLarge, InvariantError,
    ProtocolViolation,
)
from sdnmc.explore.base import replay
from sdnmc.network.builder import build_initial_config
from sdnmc.network.topology import Topology
from sdnmc.network.types import MatchField, PacketKind, ToHost, ToSwitch
from sdnmc.policies import PolicySpec
from sdnmc.semantics import (
    FloodOut, ModState, New, PktIn, PktOut, PortPacket, crosscheck,
    enumerate_final_states, equivalent, initial_state, successors,
)

from t.helpers import (
    LINE_HOSTS, LINE_LINKS, MI_HOSTS, OTHER, PAIR_HOSTS, PAIR_LINKS,
    SMALL_SCENARIOS, lb_topology, lb_spec, packet, scenario, small_scenario,
)

P1 = packet(1, 'H0', 'VIP')
P2 = packet(2, 'R2', 'VIP')


def follow(st, *rules):
    for rule in rules:
        nexts = [s for r, s in successors(st) if r == rule]
        assert len(nexts) == 1, (rule, nexts)
        st, = nexts
    return st


class test_channel_items:

    def test_kinds_never_equal(self):
        assert PktOut(1) != FloodOut(1)
        assert PktOut(1) == PktOut(1)
        assert len({PktOut(1), FloodOut(1), PktOut(1)}) == 2

    def test_fields(self):
        item = PktIn('S1', 0, 1, P1.header)
        assert item.sid == 'S1'
        assert item.header == P1.header


class test_initial_state:

    def test_concurrent(self):
        st = initial_state(lb_topology(), lb_spec(), [('H0', P1), ('R2', P2)])
        assert [h.name for h in st.hosts] == ['H0', 'R1', 'R2']
        assert [s.name for s in st.switches] == ['S1', 'S2', 'S3']
        assert st.host('H0').inbox == (New(P1),)
        assert st.host('R2').inbox == (New(P2),)
        assert st.host('R2').switch == 'S3'
        assert not st.staged
        assert st.controller.policy.counter == 0

    def test_serial(self):
        st = initial_state(
            lb_topology(), lb_spec(), [('H0', P1), ('R2', P2)], serial=True)
        assert st.host('H0').inbox == (New(P1),)
        assert st.host('R2').inbox == ()
        assert st.staged == (('R2', New(P2)),)

    def test_unknown_component(self):
        st = initial_state(lb_topology(), lb_spec())
        with pytest.raises(KeyError):
            st.host('S1')
        with pytest.raises(KeyError):
            st.switch('H0')


class test_successors:

    def setup(self):
        self.st = initial_state(lb_topology(), lb_spec(), [('H0', P1)])

    def test_packet_in(self):
        st = follow(self.st, 'si', 'shp3')
        s1 = st.switch('S1')
        assert s1.buffer == ((1, P1, 0),)
        assert st.controller.inbox == (PktIn('S1', 0, 1, P1.header),)

    def test_controller_decision(self):
        st = follow(self.st, 'si', 'shp3', 'chm')
        assert st.controller.policy.counter == 1
        assert set(st.switch('S1').inbox) == {
            ModState(MatchField(P1.header, 0), 0, ToSwitch('S2', 1)),
            PktOut(1),
        }
        assert st.switch('S2').inbox == (
            ModState(MatchField(P1.header, 1), 0, ToHost('R1')),)
        assert sorted(r for r, _ in successors(st)) == ['shm', 'shm', 'so3']

    def test_packet_out_before_install_drops(self):
        st = follow(self.st, 'si', 'shp3', 'chm', 'so3')
        assert st.switch('S1').dropped == (1,)
        assert st.switch('S1').buffer == ()

    def test_final_state(self):
        st = initial_state(lb_topology(), lb_spec())
        assert successors(st) == set()
        assert st.quiet

    def test_unknown_packet_out(self):
        st = initial_state(lb_topology(), lb_spec()).send_switch(
            'S1', PktOut(9))
        with pytest.raises(ProtocolViolation):
            successors(st)

    def test_duplicate_buffer(self):
        st = follow(self.st, 'si', 'shp3')
        st = st.send_switch('S1', PortPacket(0, P1))
        with pytest.raises(InvariantError):
            successors(st)

    def test_flood(self):
        st = initial_state(
            Topology(LINE_HOSTS, LINE_LINKS), PolicySpec.create('LE'),
            [('A', packet(1, 'A', 'C', PacketKind.AUTH))])
        st = follow(st, 'si', 'shp3', 'chm')
        assert st.switch('S1').inbox == (FloodOut(1),)
        st = follow(st, 'sof')
        assert st.switch('S2').inbox == (
            PortPacket(1, packet(1, 'A', 'C', PacketKind.AUTH)),)

    def test_serial_release(self):
        st = initial_state(
            Topology(MI_HOSTS), PolicySpec.create('MI', trusted_port=1),
            [('A', packet(1, 'A', 'C')), ('B', packet(2, 'B', 'C'))],
            serial=True)
        st = follow(st, 'si', 'shp3', 'chm')
        assert st.staged
        st = follow(st, 'shm', 'so2')
        assert st.staged
        st = follow(st, 'hhp')
        assert not st.staged
        assert st.host('B').inbox == (New(packet(2, 'B', 'C')),)
        assert st.host('C').delivered == (packet(1, 'A', 'C'),)


class test_enumerate_final_states:

    def test_lb_one_packet(self):
        st = initial_state(lb_topology(), lb_spec(), [('H0', P1)])
        finals, exhausted = enumerate_final_states(st, 30)
        assert any(f.host('R1').delivered == (P1,) for f in finals)
        assert any(f.switch('S1').dropped == (1,) for f in finals)
        assert all(f.quiet for f in finals)

    def test_bound(self):
        st = initial_state(lb_topology(), lb_spec(), [('H0', P1)])
        assert enumerate_final_states(st, 2) == (set(), True)

    def test_no_packets(self):
        st = initial_state(lb_topology(), lb_spec())
        assert enumerate_final_states(st, 0) == ({st}, False)


class test_equivalent:

    def setup(self):
        self.st = initial_state(lb_topology(), lb_spec(), [('H0', P1)])
        self.cfg = build_initial_config(lb_topology(), lb_spec(), [('H0', P1)])

    def test_initial(self):
        assert equivalent(self.st, self.cfg)

    def test_step_by_step(self):
        steps = [('si', (4, 1)), ('shp3', (1, 2)), ('chm', (0, 3))]
        st, cfg = self.st, self.cfg
        for rule, choice in steps:
            st, cfg = follow(st, rule), replay(cfg, [choice])
            assert equivalent(st, cfg)

    def test_out_of_step(self):
        assert not equivalent(follow(self.st, 'si'), self.cfg)
        assert not equivalent(self.st, replay(self.cfg, [(4, 1)]))

    def test_policy_state(self):
        st = self.st._replace(controller=self.st.controller._replace(
            policy=self.st.controller.policy._replace(counter=1)))
        assert not equivalent(st, self.cfg)

    def test_other_topology(self):
        cfg = build_initial_config(
            Topology(PAIR_HOSTS, PAIR_LINKS), lb_spec())
        assert not equivalent(initial_state(lb_topology(), lb_spec()), cfg)

    def test_serial(self):
        injections = [('H0', P1), ('R2', P2)]
        st = initial_state(lb_topology(), lb_spec(), injections, serial=True)
        cfg = build_initial_config(
            lb_topology(), lb_spec(), injections, serial=True)
        assert equivalent(st, cfg)
        assert not equivalent(st._replace(staged=()), cfg)


class test_crosscheck:

    @pytest.mark.parametrize('name', sorted(SMALL_SCENARIOS))
    def test_match(self, name):
        report = crosscheck(small_scenario(name), app=self.app)
        assert report.matched, report
        assert report.oracle_finals == report.actor_finals
        assert report.unmatched_oracle == report.unmatched_actor == 0

    def test_step_bound(self):
        report = crosscheck(scenario('lb'), app=self.app)
        assert report.step_bound == 10 * 1 * 3
        assert report.oracle_finals > 1

    def test_bundled(self):
        sc = self.app.load_scenario('lb_buggy_1pkt')
        assert crosscheck(sc, app=self.app).matched

    def test_barriers_rejected(self):
        with pytest.raises(BarrierScenarioRejected):
            crosscheck(scenario('lbb', policy='LBB'), app=self.app)
        with pytest.raises(BarrierScenarioRejected):
            crosscheck(scenario('lb', barriers=True), app=self.app)

    def test_too_many_packets(self):
        sc = scenario('big', injections=[('H0', 'VIP', OTHER, 3)])
        with pytest.raises(InstanceTooLarge):
            crosscheck(sc, app=self.app)

    def test_too_many_switches(self):
        sc = scenario(
            'wide', hosts=[('S1', 'A', 0), ('S4', 'B', 0)],
            links=[('S1', 1, 'S2', 1), ('S2', 2, 'S3', 1),
                   ('S3', 2, 'S4', 1)],
            policy='SSH_CORRECT', params={}, injections=[('A', 'B')])
        with pytest.raises(InstanceTooLarge):
            crosscheck(sc, app=self.app)
