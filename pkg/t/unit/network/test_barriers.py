from sdnmc.actors import Event, Spawn, Step, behavior
from sdnmc.explore.base import ExplorationOptions, explore
from sdnmc.network.barriers import (
    BARRIER_OFF, BARRIER_ON, BarrierController, barrier_invariant_monitor,
)
from sdnmc.network.builder import build_initial_config
from sdnmc.properties import monitors_for

from t.helpers import lb_topology, lb_spec, packet
from t.unit.network.test_behaviors import run

P1 = packet(1, 'H0', 'VIP')
P2 = packet(2, 'R1', 'VIP')


@behavior
class FaultyBarrierController(BarrierController):
    """Raises barriers without waiting for the switch to be free."""

    kind = 'FaultyBarrierController'
    wait_before_request = False


def step(task, actor=0, spawns=(), events=(), finished=False):
    return Step(
        actor, 'BarrierController', task, 'controlHandleMessage', None,
        tuple(Spawn(*s) for s in spawns),
        tuple(Event(*e) for e in events), (), finished)


def on(offset=0, sid='S1', aid=1):
    return (offset, BARRIER_ON, (sid, aid))


def off(offset=0, sid='S1', aid=1):
    return (offset, BARRIER_OFF, (sid, aid))


class test_barrier_invariant_monitor:

    def test_sound_window(self):
        assert barrier_invariant_monitor([
            step(3, spawns=[(4, 1, 'switchHandleMessage')], events=[on(1)]),
            step(4, actor=1, finished=True),
            step(3, events=[off()], spawns=[(5, 1, 'sendOut')]),
        ]) == []

    def test_pending_message_unfinished(self):
        v, = barrier_invariant_monitor([
            step(3, spawns=[(4, 1, 'switchHandleMessage')], events=[on(1)]),
            step(3, events=[off()]),
        ])
        assert v.property == 'barrier'
        assert v.location == 'S1'
        assert 'task 4 unfinished' in v.message

    def test_message_sent_during_window(self):
        v, = barrier_invariant_monitor([
            step(3, events=[on()]),
            step(7, spawns=[(8, 1, 'sendOut')]),
            step(8, actor=1, finished=True),
            step(3, events=[off()]),
        ])
        assert 'sent while a barrier is active' in v.message

    def test_spawn_after_event_in_same_step(self):
        v, = barrier_invariant_monitor([
            step(3, spawns=[(4, 1, 'flood')], events=[on(0)]),
            step(4, actor=1, finished=True),
            step(3, events=[off()]),
        ])
        assert 'flood task 4' in v.message

    def test_nested_windows(self):
        violations = barrier_invariant_monitor([
            step(3, events=[on()]),
            step(5, events=[on()]),
            step(3, events=[off()]),
            step(5, events=[off()]),
        ])
        assert [v.message for v in violations] == [
            'barrier raised by task 5 while task 3 holds one',
        ]

    def test_other_switches_are_independent(self):
        assert barrier_invariant_monitor([
            step(3, events=[on()]),
            step(7, spawns=[(8, 2, 'sendOut')]),
            step(3, events=[off()]),
        ]) == []

    def test_other_methods_ignored(self):
        assert barrier_invariant_monitor([
            step(3, events=[on()]),
            step(7, spawns=[(8, 1, 'switchHandlePacket')]),
            step(3, events=[off()]),
        ]) == []


class test_BarrierController:

    def setup(self):
        self.cfg = build_initial_config(
            lb_topology(), lb_spec('LBB'), [('H0', P1)], barriers=True)

    def test_delivers(self):
        cfg, steps = run(self.cfg)
        assert cfg.actors[5].heap['delivered'] == (P1,)
        assert cfg.actors[0].heap['barrier_on'] == frozenset()
        assert barrier_invariant_monitor(steps) == []

    def test_windows_in_switch_order(self):
        cfg, steps = run(self.cfg, max)
        events = [(e.name, e.args[0]) for s in steps for e in s.events]
        assert events == [
            (BARRIER_ON, 'S1'), (BARRIER_OFF, 'S1'),
            (BARRIER_ON, 'S2'), (BARRIER_OFF, 'S2'),
        ]
        assert cfg.actors[5].heap['delivered'] == (P1,)
        assert barrier_invariant_monitor(steps) == []

    def test_send_out_waits_for_installs(self):
        cfg, steps = run(self.cfg, max)
        methods = [s.method for s in steps if s.actor == 1]
        assert methods.index('switchHandleMessage') < methods.index('sendOut')

    def test_monitor_attached(self):
        assert 'barrier' in monitors_for((), self.cfg).names


class test_faulty_controller:

    def test_nested_windows_found(self):
        cfg0 = build_initial_config(
            lb_topology(), lb_spec('LBB'), [('H0', P1), ('R1', P2)],
            controller='FaultyBarrierController')
        result = explore(cfg0, ExplorationOptions())
        messages = [
            c.violation.message for c in result.violations
            if c.violation.property == 'barrier'
        ]
        assert any('while task' in m for m in messages)

    def test_correct_controller_is_sound(self):
        cfg0 = build_initial_config(
            lb_topology(), lb_spec('LBB'), [('H0', P1), ('R1', P2)],
            barriers=True)
        result = explore(cfg0, ExplorationOptions())
        assert result.executions
        assert not [c for c in result.violations
                    if c.violation.property == 'barrier']
