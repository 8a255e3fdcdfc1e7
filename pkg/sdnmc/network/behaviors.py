"""Host, switch and controller behaviors.

Heap regions declared by these behaviors are keyed by what they touch,
so the explorer can tell apart steps working on different flow-table
entries or different buffered packets:

- ``('flowT', match)``: the flow-table entries for one match field.
- ``('buffer', pid)``, ``('seen', pid)``, ``('dropped', pid)``,
  ``('delivered', pid)``: per-packet bookkeeping.
- ``('policy',)``: the controller's policy state.
- ``('errors', record)``: the controller's error flag.
"""
from sdnmc.actors import Behavior, Violation, behavior
from sdnmc.exceptions import InvariantError, ProtocolViolation, TopologyError
from sdnmc.policies import apply_policy
from sdnmc.utils.log import get_logger

from .types import (
    Flood, MatchField, ToHost, ToSwitch, contradicts, lookup,
)

__all__ = ['Host', 'Switch', 'Controller']

E_DUPLICATE_BUFFER = 'Packet {0} is already buffered at switch {1!r}'
E_UNKNOWN_PACKET = 'sendOut of packet {0} unknown to switch {1!r}'
E_UNKNOWN_SWITCH = 'Policy directive targets unknown switch {0!r}'

logger = get_logger(__name__)


@behavior
class Host(Behavior):
    """End host: injects packets and records the ones delivered to it."""

    kind = 'Host'
    summary_fields = ('name', 'delivered')

    def sendIn(self, ctx, point, l):
        ctx.spawn(ctx.get('switch'), 'switchHandlePacket',
                  packet=l['packet'], port=ctx.get('port'))
        return self.finish(l)

    def hostHandlePacket(self, ctx, point, l):
        packet = l['packet']
        ctx.write('delivered', packet.id)
        ctx.set('delivered', tuple(sorted(ctx.get('delivered') + (packet,))))
        return self.finish(l)


@behavior
class Switch(Behavior):
    """Switch: forwards by flow table, asks the controller on a miss."""

    kind = 'Switch'
    summary_fields = ('name', 'flowT', 'buffer', 'dropped')

    def switchHandlePacket(self, ctx, point, l):
        packet, port = l['packet'], l['port']
        seen = ctx.get('seen')
        if seen is not None:
            ctx.read('seen', packet.id)
            if packet.id in seen:
                self.report(ctx, ctx.violation(
                    'loop', ctx.get('name'),
                    'packet {0} reached {1} twice'.format(
                        packet, ctx.get('name'))))
                return self.finish(l)
            ctx.write('seen', packet.id)
            ctx.set('seen', seen | {packet.id})

        m = MatchField(packet.header, port)
        ctx.read('flowT', m)
        action = lookup(ctx.get('flowT'), m)
        if action is None:
            buffer = dict(ctx.get('buffer'))
            if packet.id in buffer:
                raise InvariantError(
                    E_DUPLICATE_BUFFER.format(packet.id, ctx.get('name')))
            ctx.write('buffer', packet.id)
            buffer[packet.id] = (packet, port)
            ctx.set('buffer', buffer)
            ctx.spawn(ctx.get('ctrl'), 'controlHandleMessage',
                      sid=ctx.get('name'), port=port,
                      pid=packet.id, header=packet.header)
        else:
            self.forward(ctx, packet, action)
        return self.finish(l)

    def sendOut(self, ctx, point, l):
        packet, port = self.take(ctx, l['pid'])
        m = MatchField(packet.header, port)
        ctx.read('flowT', m)
        self.forward(ctx, packet, lookup(ctx.get('flowT'), m))
        return self.finish(l)

    def switchHandleMessage(self, ctx, point, l):
        m, priority, action = l['match'], l['priority'], l['action']
        ft = ctx.get('flowT')
        if ctx.get('detect_conflicts'):
            ctx.read('flowT', m)
            for entry in ft.for_match(m):
                if entry.priority == priority and contradicts(
                        entry.action, action):
                    self.report(ctx, ctx.violation(
                        'contradictory', ctx.get('name'),
                        '{0} and {1} installed for {2} at priority {3}'.format(
                            entry.action, action, m, priority)))
                    break
        ctx.write('flowT', m, info=(priority, action))
        ctx.set('flowT', ft.put(m, priority, action))
        return self.finish(l)

    def flood(self, ctx, point, l):
        packet, in_port = self.take(ctx, l['pid'])
        peers = ctx.get('peers')
        for port, (name, peer_port) in sorted(ctx.get('ports').items()):
            if port == in_port:
                continue
            if peer_port is None:
                ctx.spawn(peers[name], 'hostHandlePacket', packet=packet)
            else:
                ctx.spawn(peers[name], 'switchHandlePacket',
                          packet=packet, port=peer_port)
        return self.finish(l)

    def take(self, ctx, pid):
        buffer = dict(ctx.get('buffer'))
        try:
            packet, port = buffer.pop(pid)
        except KeyError:
            raise ProtocolViolation(
                E_UNKNOWN_PACKET.format(pid, ctx.get('name')))
        ctx.write('buffer', pid)
        ctx.set('buffer', buffer)
        return packet, port

    def forward(self, ctx, packet, action):
        peers = ctx.get('peers')
        if isinstance(action, ToSwitch):
            ctx.spawn(peers[action.switch], 'switchHandlePacket',
                      packet=packet, port=action.port)
        elif isinstance(action, ToHost):
            ctx.spawn(peers[action.host], 'hostHandlePacket', packet=packet)
        else:
            # no entry, or an explicit Drop.
            ctx.write('dropped', packet.id)
            ctx.set('dropped', tuple(sorted(
                ctx.get('dropped') + (packet.id,))))

    def report(self, ctx, violation):
        logger.debug('%s', violation)
        ctx.spawn(ctx.get('ctrl'), 'error_message', record=tuple(violation))


@behavior
class Controller(Behavior):
    """Barrier-free controller.

    Installs every directive returned by the policy and immediately
    asks the switch to send the buffered packet out, so installs and
    the send-out may run in any order.
    """

    kind = 'Controller'
    summary_fields = ('policy', 'errors')

    def controlHandleMessage(self, ctx, point, l):
        directives, flood = self.decide(ctx, l)
        srefs = ctx.get('srefs')
        for d in directives:
            ctx.spawn(srefs[d.switch], 'switchHandleMessage',
                      match=d.match, priority=d.priority, action=d.action)
        ctx.spawn(self.switch_ref(ctx, l['sid']),
                  'flood' if flood else 'sendOut', pid=l['pid'])
        return self.finish(l)

    def error_message(self, ctx, point, l):
        record = Violation(*l['record'])
        ctx.write('errors', record)
        ctx.set('errors', tuple(sorted(ctx.get('errors') + (record,))))
        return self.finish(l)

    def decide(self, ctx, l):
        """Apply the policy, returning (directives, flood flag)."""
        ctx.read('policy')
        ps = ctx.get('policy')
        decision, ps2 = apply_policy(
            ps, ctx.get('ntw'), l['sid'], l['port'], l['header'])
        if ps2 != ps:
            ctx.write('policy')
            ctx.set('policy', ps2)
        directives = tuple(d for d in decision if not isinstance(d, Flood))
        for d in directives:
            self.switch_ref(ctx, d.switch)
        return directives, len(directives) != len(decision)

    def switch_ref(self, ctx, sid):
        try:
            return ctx.get('srefs')[sid]
        except KeyError:
            raise TopologyError(E_UNKNOWN_SWITCH.format(sid))
