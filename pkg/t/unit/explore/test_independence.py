import pytest

from sdnmc.actors import Footprint, macro_step
from sdnmc.exceptions import ImproperlyConfigured
from sdnmc.explore.base import replay
from sdnmc.explore.independence import (
    ACTOR, CONTEXT, ENTRY, NAIVE, LEVELS, conflicts, dependent,
    ensure_level, footprint_of, guard_regions,
)
from sdnmc.network.builder import build_initial_config
from sdnmc.network.types import DROP, MatchField, PacketHeader, ToHost

from t.helpers import lb_topology, lb_spec, packet
from t.unit.test_actors import config

M1 = MatchField(PacketHeader('H0', 'VIP'), 0)
M2 = MatchField(PacketHeader('R2', 'VIP'), 0)


def fp(actor=1, task=1, reads=(), writes=(), installs=None):
    return Footprint(actor, task, frozenset(reads), frozenset(writes),
                     installs or {})


def entry(m, actor=1):
    return (actor, 'flowT', m)


class test_ensure_level:

    def test_levels(self):
        assert LEVELS == ('naive', 'actor', 'entry', 'context')
        assert ensure_level('ENTRY') == ENTRY

    def test_unknown(self):
        with pytest.raises(ImproperlyConfigured):
            ensure_level('exact')


class test_conflicts:

    def test_disjoint(self):
        a = fp(reads=[(1, 'buffer', 1)])
        b = fp(actor=2, writes=[(2, 'buffer', 1)])
        for level in LEVELS:
            assert not conflicts(a, b, level)

    def test_read_only(self):
        a = fp(reads=[entry(M1)])
        b = fp(task=2, reads=[entry(M1)])
        assert not conflicts(a, b, ACTOR)

    @pytest.mark.parametrize('level', LEVELS)
    def test_write_read(self, level):
        a = fp(writes=[(1, 'buffer', 1)])
        b = fp(task=2, reads=[(1, 'buffer', 1)])
        assert conflicts(a, b, level)
        assert conflicts(b, a, level)

    def test_naive_same_actor(self):
        a = fp(writes=[(1, 'buffer', 1)])
        b = fp(task=2, writes=[(1, 'buffer', 2)])
        assert conflicts(a, b, NAIVE)
        assert not conflicts(a, b, ACTOR)

    def test_entries(self):
        a = fp(writes=[entry(M1)])
        b = fp(task=2, reads=[entry(M2)])
        assert conflicts(a, b, ACTOR)
        assert not conflicts(a, b, ENTRY)
        assert not conflicts(a, b, CONTEXT)

    def test_future_done(self):
        a = fp(writes=[(None, 'done', 3)])
        b = fp(actor=2, task=4, reads=[(None, 'done', 3)])
        assert conflicts(a, b, CONTEXT)


class test_context:

    def test_same_install_twice(self):
        a = fp(writes=[entry(M1)], installs={entry(M1): (0, DROP)})
        b = fp(task=2, writes=[entry(M1)], installs={entry(M1): (0, DROP)})
        assert conflicts(a, b, ENTRY)
        assert not conflicts(a, b, CONTEXT)

    def test_different_installs(self):
        a = fp(writes=[entry(M1)], installs={entry(M1): (0, DROP)})
        b = fp(task=2, writes=[entry(M1)],
               installs={entry(M1): (0, ToHost('R1'))})
        assert conflicts(a, b, CONTEXT)

    def test_shadowed_install(self):
        cfg = build_initial_config(lb_topology(), lb_spec())
        s1 = cfg.actors[1]
        heap = dict(s1.heap, flowT=s1.heap['flowT'].put(M1, 5, ToHost('H0')))
        pre = cfg._replace(actors={**cfg.actors, 1: s1._replace(heap=heap)})
        install = fp(writes=[entry(M1)], installs={entry(M1): (0, DROP)})
        lookup = fp(task=2, reads=[entry(M1)], writes=[(1, 'buffer', 1)])
        assert not conflicts(install, lookup, CONTEXT, pre)
        assert conflicts(install, lookup, CONTEXT, cfg)
        assert conflicts(install, lookup, CONTEXT)

    def test_other_regions(self):
        a = fp(writes=[(1, 'buffer', 1)])
        b = fp(task=2, writes=[(1, 'buffer', 1)])
        assert conflicts(a, b, CONTEXT)


class test_running_example:
    # after the controller's decision s1 holds install 4 and sendOut 6,
    # s2 holds install 5.

    def setup(self):
        cfg0 = build_initial_config(
            lb_topology(), lb_spec(), [('H0', packet(1, 'H0', 'VIP'))])
        self.cfg = replay(cfg0, [(4, 1), (1, 2), (0, 3)])

    @pytest.mark.parametrize('level', LEVELS)
    def test_install_and_send_out(self, level):
        assert dependent((1, 4), (1, 6), self.cfg, level)

    @pytest.mark.parametrize('level', [ACTOR, ENTRY, CONTEXT])
    def test_other_switch(self, level):
        assert not dependent((2, 5), (1, 4), self.cfg, level)
        assert not dependent((2, 5), (1, 6), self.cfg, level)

    def test_footprint_of_enabled(self):
        f = footprint_of(self.cfg, (1, 4))
        assert f.writes >= {entry(M1), (None, 'done', 4)}
        assert f.installs[entry(M1)][0] == 0

    def test_unknown_level(self):
        with pytest.raises(ImproperlyConfigured):
            dependent((1, 4), (1, 6), self.cfg, 'exact')


class test_suspended_tasks:

    def setup(self):
        self.cfg = macro_step(config([(1, 'ping', {'target': 1})], []), (0, 1))

    def test_guard_regions(self):
        assert guard_regions(self.cfg, (0, 1)) == {(None, 'done', 2)}
        assert guard_regions(self.cfg, (1, 2)) == frozenset()

    def test_footprint_of_suspended(self):
        f = footprint_of(self.cfg, (0, 1))
        assert f.reads == {(None, 'done', 2)}
        assert not f.writes

    def test_future_completion_is_dependent(self):
        assert dependent((0, 1), (1, 2), self.cfg, CONTEXT)
