"""Barrier-aware controller and the barrier soundness monitor.

The controller records a future for every message it sends to a
switch, and before moving on to the next switch of the decision it
raises a barrier on each switch it touched: it waits for those futures
while no other controller task may send to that switch.

``barrierWait`` and ``barrierRequest`` are synchronous self-calls, so
their awaits are continuation points of ``controlHandleMessage``.
"""
from collections import defaultdict

from sdnmc.actors import FutureGuard, HeapGuard, Violation, behavior
from sdnmc.utils.functional import ordered_unique

from .behaviors import Controller

__all__ = [
    'BarrierController', 'barrier_invariant_monitor',
    'BARRIER_ON', 'BARRIER_OFF',
]

#: Trace event names, args are ``(switch name, switch actor id)``.
BARRIER_ON = 'barrier_on'
BARRIER_OFF = 'barrier_off'

#: Switch methods a barrier must wait for.
BARRIER_METHODS = frozenset({'switchHandleMessage', 'sendOut', 'flood'})


@behavior
class BarrierController(Controller):
    """Controller that raises a barrier on every switch it reconfigures."""

    kind = 'BarrierController'
    conditions = {'barrier_off': 'barrier_on'}
    summary_fields = ('policy', 'errors', 'barrier_on')

    #: Wait until the switch is free before raising its barrier.
    wait_before_request = True

    def cond_barrier_off(self, heap, sid):
        return sid not in heap['barrier_on']

    def barrier_wait(self, sid):
        return HeapGuard('barrier_off', (sid,))

    def controlHandleMessage(self, ctx, point, l):
        return getattr(self, 'chm_' + point)(ctx, l)

    def chm_entry(self, ctx, l):
        directives, flood = self.decide(ctx, l)
        l.update(directives=directives, flood=flood, i=0, j=0)
        return self.chm_install(ctx, l)

    def chm_install(self, ctx, l):
        if l['i'] < len(l['directives']):
            d = l['directives'][l['i']]
            return self.goto('spawn', l, self.barrier_wait(d.switch))
        l['ls'] = ordered_unique(d.switch for d in l['directives'])
        return self.chm_request(ctx, l)

    def chm_spawn(self, ctx, l):
        d = l['directives'][l['i']]
        future = ctx.spawn(ctx.get('srefs')[d.switch], 'switchHandleMessage',
                           match=d.match, priority=d.priority, action=d.action)
        self.put_add(ctx, d.switch, future)
        l['i'] += 1
        return self.goto('install', l)

    def chm_request(self, ctx, l):
        if l['j'] < len(l['ls']):
            sid = l['ls'][l['j']]
            if self.wait_before_request:
                return self.goto('barrier', l, self.barrier_wait(sid))
            return self.goto('barrier', l)
        return self.goto('final', l, self.barrier_wait(l['sid']))

    def chm_barrier(self, ctx, l):
        sid = l['ls'][l['j']]
        ctx.write('barrier_on', sid)
        ctx.set('barrier_on', ctx.get('barrier_on') | {sid})
        ctx.event(BARRIER_ON, sid, ctx.get('srefs')[sid])
        l.update(pending=self.take(ctx, sid), k=0)
        return self.chm_await(ctx, l)

    def chm_await(self, ctx, l):
        if l['k'] < len(l['pending']):
            future = l['pending'][l['k']]
            l['k'] += 1
            return self.goto('await', l, FutureGuard(future.task))
        sid = l['ls'][l['j']]
        ctx.write('barrier_on', sid)
        ctx.set('barrier_on', ctx.get('barrier_on') - {sid})
        ctx.event(BARRIER_OFF, sid, ctx.get('srefs')[sid])
        l.update(pending=(), j=l['j'] + 1)
        return self.chm_request(ctx, l)

    def chm_final(self, ctx, l):
        sid = l['sid']
        future = ctx.spawn(self.switch_ref(ctx, sid),
                           'flood' if l['flood'] else 'sendOut', pid=l['pid'])
        self.put_add(ctx, sid, future)
        return self.finish(l)

    def put_add(self, ctx, sid, future):
        barrier_map = dict(ctx.get('barrier_map'))
        barrier_map[sid] = barrier_map.get(sid, ()) + (future,)
        ctx.write('barrier_map', sid)
        ctx.set('barrier_map', barrier_map)

    def take(self, ctx, sid):
        barrier_map = dict(ctx.get('barrier_map'))
        futures = barrier_map.pop(sid, ())
        ctx.read('barrier_map', sid)
        ctx.write('barrier_map', sid)
        ctx.set('barrier_map', barrier_map)
        return futures


def barrier_invariant_monitor(steps):
    # type: (Sequence[Step]) -> List[Violation]
    """Check every barrier window of one execution.

    For each window opened on a switch by a controller task and closed
    by the same task:

    - every switch message pending on the switch when the window opened
      has finished when it closes,
    - no switch message is sent to the switch while the window is open,
    - no other window is opened on the switch while it is open.
    """
    violations = []
    names = {}  # switch actor -> switch name
    pending = defaultdict(set)  # switch actor -> unfinished message tasks
    windows = defaultdict(dict)  # switch actor -> owner task -> waited set

    def spawn(sp):
        if sp.method in BARRIER_METHODS:
            if windows[sp.actor]:
                violations.append(Violation(
                    'barrier', names.get(sp.actor, sp.actor),
                    '{0} task {1} sent while a barrier is active'.format(
                        sp.method, sp.task)))
            pending[sp.actor].add(sp.task)

    def on(step, sid, aid):
        names[aid] = sid
        if windows[aid]:
            violations.append(Violation(
                'barrier', sid,
                'barrier raised by task {0} while task {1} holds one'.format(
                    step.task, min(windows[aid]))))
        windows[aid][step.task] = set(pending[aid])

    def off(step, sid, aid):
        waited = windows[aid].pop(step.task, set())
        for tid in sorted(waited & pending[aid]):
            violations.append(Violation(
                'barrier', sid,
                'task {0} unfinished when the barrier completed'.format(tid)))

    for step in steps:
        offset = 0
        for event in step.events:
            for sp in step.spawns[offset:event.offset]:
                spawn(sp)
            offset = max(offset, event.offset)
            if event.name == BARRIER_ON:
                on(step, *event.args)
            elif event.name == BARRIER_OFF:
                off(step, *event.args)
        for sp in step.spawns[offset:]:
            spawn(sp)
        if step.finished:
            pending[step.actor].discard(step.task)
    return violations
