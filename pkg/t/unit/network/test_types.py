import pytest

from hypothesis import given, strategies as st

from sdnmc.network.types import (
    DROP, Entry, FlowTable, MatchField, PacketHeader, PacketKind,
    ToHost, ToSwitch, action_from_list, contradicts, header_from_list,
    is_forward, lookup, put,
)

H = PacketHeader('H0', 'VIP')
M0, M1 = MatchField(H, 0), MatchField(H, 1)

actions = st.sampled_from([
    ToHost('R1'), ToHost('R2'), ToSwitch('S2', 1), ToSwitch('S3', 1), DROP,
])
entries = st.lists(st.tuples(
    st.sampled_from([M0, M1]), st.integers(0, 2), actions), max_size=6)


class test_FlowTable:

    def test_lookup_empty(self):
        assert lookup(FlowTable(), M0) is None

    def test_highest_priority_wins(self):
        ft = put(put(FlowTable(), M0, 1, DROP), M0, 0, ToHost('R1'))
        assert lookup(ft, M0) == DROP
        assert lookup(ft, M1) is None

    def test_most_recent_on_tie(self):
        ft = put(put(FlowTable(), M0, 0, DROP), M0, 0, ToHost('R1'))
        assert lookup(ft, M0) == ToHost('R1')

    def test_put_is_persistent(self):
        ft = FlowTable()
        ft2 = ft.put(M0, 0, DROP)
        assert len(ft) == 0
        assert list(ft2) == [Entry(M0, 0, DROP)]

    def test_has_priority_above(self):
        ft = FlowTable([(M0, 2, DROP)])
        assert ft.has_priority_above(M0, 1)
        assert not ft.has_priority_above(M0, 2)
        assert not ft.has_priority_above(M1, 0)

    def test_matches(self):
        ft = FlowTable([(M1, 0, DROP), (M0, 0, DROP), (M1, 1, DROP)])
        assert ft.matches() == [M1, M0]

    def test_installs_on_different_matches_commute(self):
        a = FlowTable().put(M0, 0, DROP).put(M1, 0, ToHost('R1'))
        b = FlowTable().put(M1, 0, ToHost('R1')).put(M0, 0, DROP)
        assert a == b
        assert hash(a) == hash(b)

    def test_installs_on_same_match_keep_order(self):
        a = FlowTable().put(M0, 0, DROP).put(M0, 0, ToHost('R1'))
        b = FlowTable().put(M0, 0, ToHost('R1')).put(M0, 0, DROP)
        assert a != b

    def test_json(self):
        ft = FlowTable([(M0, 0, ToHost('R1'))])
        assert ft.__json__() == ['(H0->VIP/other, 0) -> host:R1 @0']

    @given(entries, st.integers(0, 2), actions)
    def test_other_match_is_invisible(self, e, priority, action):
        ft = FlowTable(e)
        assert ft.put(M1, priority, action).lookup(M0) == ft.lookup(M0)

    @given(entries, st.integers(0, 2), actions)
    def test_put_then_lookup(self, e, priority, action):
        ft = FlowTable(e).put(M0, priority, action)
        if not ft.has_priority_above(M0, priority):
            assert ft.lookup(M0) == action


@pytest.mark.parametrize('a,b,expected', [
    (DROP, ToHost('R1'), True),
    (ToSwitch('S2', 1), DROP, True),
    (DROP, DROP, False),
    (ToHost('R1'), ToHost('R2'), False),
])
def test_contradicts(a, b, expected):
    assert contradicts(a, b) is expected


def test_is_forward():
    assert is_forward(ToHost('R1'))
    assert is_forward(ToSwitch('S1', 2))
    assert not is_forward(DROP)
    assert not is_forward(None)


def test_header_from_list():
    h = header_from_list(['A', 'B', 'ssh'])
    assert h == PacketHeader('A', 'B', PacketKind.SSH)
    assert str(h) == 'A->B/ssh'


@pytest.mark.parametrize('value,expected', [
    (['host', 'R1'], ToHost('R1')),
    (['switch', 'S2', 1], ToSwitch('S2', 1)),
    (['drop'], DROP),
])
def test_action_from_list(value, expected):
    assert action_from_list(value) == expected
