"""Packets, match fields, actions and flow tables."""
from collections import namedtuple
from enum import Enum

__all__ = [
    'PacketKind', 'PacketHeader', 'Packet', 'MatchField',
    'ToHost', 'ToSwitch', 'Drop', 'DROP', 'Entry', 'FlowTable',
    'Directive', 'Flood', 'FLOOD',
    'lookup', 'put', 'is_forward', 'contradicts',
    'action_from_list', 'header_from_list',
]


class PacketKind(str, Enum):
    """Traffic class of a packet."""

    SSH = 'ssh'
    OTHER = 'other'
    AUTH = 'auth'


PacketHeader = namedtuple('PacketHeader', ('src', 'dst', 'kind'))
PacketHeader.__new__.__defaults__ = (PacketKind.OTHER,)
PacketHeader.__str__ = lambda h: '{0}->{1}/{2}'.format(
    h.src, h.dst, PacketKind(h.kind).value)

Packet = namedtuple('Packet', ('id', 'header'))
Packet.__str__ = lambda p: 'p{0}({1})'.format(p.id, p.header)

MatchField = namedtuple('MatchField', ('header', 'port'))
MatchField.__str__ = lambda m: '({0}, {1})'.format(m.header, m.port)

#: Deliver to the host with this name.
ToHost = namedtuple('ToHost', ('host',))
ToHost.__str__ = lambda a: 'host:{0}'.format(a.host)

#: Forward to a neighbor switch, arriving there on ``port``.
ToSwitch = namedtuple('ToSwitch', ('switch', 'port'))
ToSwitch.__str__ = lambda a: 'switch:{0}:{1}'.format(a.switch, a.port)

Drop = namedtuple('Drop', ())
Drop.__str__ = lambda a: 'drop'
DROP = Drop()

Entry = namedtuple('Entry', ('match', 'priority', 'action'))
Entry.__str__ = lambda e: '{0} -> {1} @{2}'.format(
    e.match, e.action, e.priority)

#: Element of a policy decision: install ``match -> action`` on ``switch``.
Directive = namedtuple('Directive', ('switch', 'match', 'priority', 'action'))

Flood = namedtuple('Flood', ())

#: Directive list sentinel: flood the packet instead of sending it out.
FLOOD = Flood()


class FlowTable:
    """Prioritized exact-match flow table.

    Entries are kept in insertion order and duplicates are allowed.
    Two tables are equal when they hold the same entries for every
    match in the same relative order: installs on different matches
    commute.
    """

    __slots__ = ('entries',)

    def __init__(self, entries=()):
        self.entries = tuple(Entry(*e) for e in entries)

    def lookup(self, match):
        # type: (MatchField) -> Optional[Action]
        best = None
        for entry in self.entries:
            if entry.match == match and (
                    best is None or entry.priority >= best.priority):
                best = entry
        return best.action if best is not None else None

    def put(self, match, priority, action):
        # type: (MatchField, int, Action) -> FlowTable
        return type(self)(self.entries + (Entry(match, priority, action),))

    def for_match(self, match):
        # type: (MatchField) -> List[Entry]
        return [e for e in self.entries if e.match == match]

    def has_priority_above(self, match, priority):
        # type: (MatchField, int) -> bool
        return any(e.priority > priority for e in self.for_match(match))

    def matches(self):
        seen = []
        for entry in self.entries:
            if entry.match not in seen:
                seen.append(entry.match)
        return seen

    def canonical(self):
        groups = {}
        for entry in self.entries:
            groups.setdefault(entry.match, []).append(
                (entry.priority, entry.action))
        return ('FlowTable',) + tuple(sorted(
            ((m, tuple(v)) for m, v in groups.items()), key=repr))

    def __json__(self):
        return [
            str(Entry(m, priority, action))
            for m, entries in self.canonical()[1:]
            for priority, action in entries
        ]

    def __eq__(self, other):
        if not isinstance(other, FlowTable):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __hash__(self):
        return hash(self.canonical())

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return '<FlowTable: {0!r}>'.format(self.__json__())

    def __reduce__(self):
        return type(self), (self.entries,)


def lookup(ft, m):
    # type: (FlowTable, MatchField) -> Optional[Action]
    """Action of the highest-priority entry for ``m``, most recent on ties."""
    return ft.lookup(m)


def put(ft, m, priority, a):
    # type: (FlowTable, MatchField, int, Action) -> FlowTable
    """Return new table with the entry appended."""
    return ft.put(m, priority, a)


def is_forward(action):
    # type: (Action) -> bool
    return isinstance(action, (ToHost, ToSwitch))


def contradicts(a, b):
    # type: (Action, Action) -> bool
    """Drop against forward."""
    return (isinstance(a, Drop) and is_forward(b) or
            isinstance(b, Drop) and is_forward(a))


def header_from_list(value):
    # type: (Sequence) -> PacketHeader
    src, dst, kind = value
    return PacketHeader(src, dst, PacketKind(kind))


def action_from_list(value):
    # type: (Sequence) -> Action
    """Decode ``["host", name]``, ``["switch", name, port]`` or ``["drop"]``."""
    tag, args = value[0], value[1:]
    return {'host': ToHost, 'switch': ToSwitch, 'drop': Drop}[tag](*args)
