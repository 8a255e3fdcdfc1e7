"""Actor runtime.

Configurations are immutable values: every operation returns a new
:class:`ActorConfig` and leaves its input untouched.  A task runs from
its continuation point to the next release point in one macro-step,
either finishing or suspending on an await whose guard does not hold.

Behaviors are registered by kind with :func:`behavior`, and each method
is a step function ``(ctx, point, locals) -> (point, locals, guard)``.
Returning a guard means "await this before running ``point``", returning
:data:`FINISHED` ends the task.
"""
import hashlib

from collections import namedtuple
from enum import Enum

from .exceptions import NotEnabled, ProtocolViolation

__all__ = [
    'FREE', 'ENTRY', 'FINISHED',
    'ActorConfig', 'Actor', 'Task', 'Future', 'FutureGuard', 'HeapGuard',
    'Staged', 'Footprint', 'Spawn', 'Event', 'Step', 'Violation',
    'Behavior', 'StepContext', 'behavior', 'behaviors',
    'enabled_tasks', 'execute', 'macro_step', 'settle',
    'is_complete', 'detect_deadlock',
    'canonical_form', 'canonical_fingerprint', 'describe', 'render',
]

E_NOT_ENABLED = 'Task {1} of actor {0} is not enabled'
E_UNKNOWN_ACTOR = 'Spawn of {0!r} targets unknown actor {1!r}'
E_UNKNOWN_KIND = 'No behavior registered for actor kind {0!r}'

#: Lock value of an actor not running any task.
FREE = None

#: Continuation point of a task that has not started yet.
ENTRY = 'entry'

#: Continuation point of a task that returned.
FINISHED = 'finished'

ActorConfig = namedtuple('ActorConfig', (
    'actors', 'next_task', 'next_actor', 'staged',
))
ActorConfig.__new__.__defaults__ = (1, 0, ())

Actor = namedtuple('Actor', ('id', 'kind', 'heap', 'queue', 'active'))
Actor.__new__.__defaults__ = ((), FREE)

Task = namedtuple('Task', ('id', 'method', 'locals', 'point', 'guard'))
Task.__new__.__defaults__ = (ENTRY, None)

#: Value stored by a spawn, naming the task it will await.
Future = namedtuple('Future', ('task',))

#: Await on the completion of a task.
FutureGuard = namedtuple('FutureGuard', ('task',))

#: Await on a named Boolean condition over the actor heap.
HeapGuard = namedtuple('HeapGuard', ('condition', 'args'))

#: Injection held back until the configuration is quiet.
Staged = namedtuple('Staged', ('actor', 'method', 'args'))

Footprint = namedtuple('Footprint', (
    'actor', 'task', 'reads', 'writes', 'installs',
))

Spawn = namedtuple('Spawn', ('task', 'actor', 'method'))

#: Trace event emitted by a step, after ``offset`` of its spawns.
Event = namedtuple('Event', ('offset', 'name', 'args'))

Step = namedtuple('Step', (
    'actor', 'kind', 'task', 'method', 'footprint',
    'spawns', 'events', 'violations', 'finished',
))

Violation = namedtuple('Violation', ('property', 'location', 'message'))
Violation.__str__ = lambda v: '[{0}] at {1}: {2}'.format(*v)

behaviors = {}


def behavior(cls):
    # type: (type) -> type
    """Class decorator registering an actor behavior by its kind."""
    behaviors[cls.kind or cls.__name__] = cls()
    return cls


class Behavior:
    """Base class for actor behaviors.

    Subclasses define one step function per method, named after
    the method.  Heap conditions usable with :class:`HeapGuard` are
    methods named ``cond_<name>``, and :attr:`conditions` maps the
    condition name to the heap region it reads.
    """

    kind = None

    #: Mapping of condition name to the heap region it reads.
    conditions = {}

    #: Heap fields shown in reports.
    summary_fields = ()

    def run(self, ctx, method, point, locals_):
        return getattr(self, method)(ctx, point, locals_)

    def holds(self, guard, heap):
        # type: (HeapGuard, Mapping) -> bool
        return getattr(self, 'cond_' + guard.condition)(heap, *guard.args)

    def guard_region(self, actor_id, guard):
        return (actor_id, self.conditions[guard.condition]) + tuple(
            guard.args)

    def finish(self, locals_):
        return FINISHED, locals_, None

    def goto(self, point, locals_, guard=None):
        return point, locals_, guard


def _behavior_for(kind):
    try:
        return behaviors[kind]
    except KeyError:
        raise ProtocolViolation(E_UNKNOWN_KIND.format(kind))


class StepContext:
    """Effects collected while one task runs.

    Step functions read and write the actor heap through
    :meth:`get` and :meth:`set`, and declare the heap regions
    they touch with :meth:`read` and :meth:`write`.  Regions are
    what the explorer uses to decide whether two steps commute.
    """

    def __init__(self, cfg, actor):
        # type: (ActorConfig, Actor) -> None
        self.cfg = cfg
        self.actor = actor
        self.heap = dict(actor.heap)
        self.reads = set()
        self.writes = set()
        self.installs = {}
        self.spawns = []
        self.created = []
        self.events = []
        self.violations = []
        self.next_task = cfg.next_task
        self.next_actor = cfg.next_actor

    @property
    def id(self):
        return self.actor.id

    def get(self, field, default=None):
        return self.heap.get(field, default)

    def set(self, field, value):
        # values are replaced, never mutated in place.
        self.heap[field] = value

    def read(self, *region):
        self.reads.add((self.actor.id,) + region)

    def write(self, *region, info=None):
        region = (self.actor.id,) + region
        self.writes.add(region)
        if info is not None:
            self.installs[region] = info

    def spawn(self, target, method, **args):
        # type: (int, str, **Any) -> Future
        """Asynchronous call: queue ``method`` on actor ``target``."""
        created = {aid for aid, _, _ in self.created}
        if target not in self.cfg.actors and target not in created:
            raise ProtocolViolation(E_UNKNOWN_ACTOR.format(method, target))
        tid, self.next_task = self.next_task, self.next_task + 1
        self.spawns.append((tid, target, method, args))
        return Future(tid)

    def new_actor(self, kind, **heap):
        # type: (str, **Any) -> int
        aid, self.next_actor = self.next_actor, self.next_actor + 1
        self.created.append((aid, kind, heap))
        return aid

    def event(self, name, *args):
        self.events.append(Event(len(self.spawns), name, args))

    def violation(self, prop, location, message):
        # type: (str, str, str) -> Violation
        v = Violation(prop, location, message)
        self.violations.append(v)
        return v


def _finished(cfg):
    return {
        t.id for actor in cfg.actors.values()
        for t in actor.queue if t.point == FINISHED
    }


def _guard_holds(guard, heap, impl, finished):
    if guard is None:
        return True
    if isinstance(guard, FutureGuard):
        return guard.task in finished
    return impl.holds(guard, heap)


def enabled_tasks(cfg):
    # type: (ActorConfig) -> FrozenSet[Tuple[int, int]]
    """Return every (actor, task) pair that may run a macro-step."""
    finished = _finished(cfg)
    enabled = set()
    for actor in cfg.actors.values():
        if actor.active is not FREE:
            continue
        impl = None
        for task in actor.queue:
            if task.point == FINISHED:
                continue
            if task.guard is not None and impl is None:
                impl = _behavior_for(actor.kind)
            if _guard_holds(task.guard, actor.heap, impl, finished):
                enabled.add((actor.id, task.id))
    return frozenset(enabled)


def _find_task(actor, task_id):
    for task in actor.queue:
        if task.id == task_id:
            return task


def execute(cfg, choice):
    # type: (ActorConfig, Tuple[int, int]) -> Tuple[ActorConfig, Step]
    """Run one macro-step and return the new configuration with its record.

    Raises:
        ~sdnmc.exceptions.NotEnabled: if the choice is not enabled.
    """
    actor_id, task_id = choice
    actor = cfg.actors.get(actor_id)
    task = _find_task(actor, task_id) if actor is not None else None
    if task is None or task.point == FINISHED or actor.active is not FREE:
        raise NotEnabled(E_NOT_ENABLED.format(actor_id, task_id))
    impl = _behavior_for(actor.kind)
    finished = _finished(cfg)
    if not _guard_holds(task.guard, actor.heap, impl, finished):
        raise NotEnabled(E_NOT_ENABLED.format(actor_id, task_id))

    ctx = StepContext(cfg, actor)
    point, locals_, guard = task.point, dict(task.locals), task.guard
    while True:
        if guard is not None:
            if not _guard_holds(guard, ctx.heap, impl, finished):
                # await with a false condition: release the lock.
                break
            if isinstance(guard, FutureGuard):
                ctx.reads.add((None, 'done', guard.task))
            else:
                ctx.reads.add(impl.guard_region(actor.id, guard))
            guard = None
        point, locals_, guard = impl.run(ctx, task.method, point, locals_)
        if point == FINISHED:
            guard = None
            ctx.writes.add((None, 'done', task.id))
            break

    new_task = task._replace(locals=locals_, point=point, guard=guard)
    return _commit(cfg, actor, new_task, ctx), Step(
        actor=actor.id,
        kind=actor.kind,
        task=task.id,
        method=task.method,
        footprint=Footprint(
            actor.id, task.id,
            frozenset(ctx.reads), frozenset(ctx.writes), ctx.installs),
        spawns=tuple(
            Spawn(tid, target, method)
            for tid, target, method, _ in ctx.spawns),
        events=tuple(ctx.events),
        violations=tuple(ctx.violations),
        finished=point == FINISHED,
    )


def _commit(cfg, actor, new_task, ctx):
    actors = dict(cfg.actors)
    actors[actor.id] = actor._replace(
        heap=ctx.heap,
        queue=tuple(
            new_task if t.id == new_task.id else t for t in actor.queue),
        active=FREE,
    )
    for aid, kind, heap in ctx.created:
        actors[aid] = Actor(aid, kind, heap, (), FREE)
    for tid, target, method, args in ctx.spawns:
        receiver = actors[target]
        actors[target] = receiver._replace(
            queue=receiver.queue + (Task(tid, method, args, ENTRY, None),))
    return cfg._replace(
        actors=actors, next_task=ctx.next_task, next_actor=ctx.next_actor)


def macro_step(cfg, choice):
    # type: (ActorConfig, Tuple[int, int]) -> ActorConfig
    """Run the chosen task to its next release point."""
    return execute(cfg, choice)[0]


def _unfinished(cfg):
    return any(
        t.point != FINISHED
        for actor in cfg.actors.values() for t in actor.queue
    )


def settle(cfg):
    # type: (ActorConfig) -> ActorConfig
    """Release the next staged injection once every task has finished."""
    if not cfg.staged or _unfinished(cfg):
        return cfg
    staged, rest = cfg.staged[0], cfg.staged[1:]
    actors = dict(cfg.actors)
    receiver = actors[staged.actor]
    actors[staged.actor] = receiver._replace(queue=receiver.queue + (
        Task(cfg.next_task, staged.method, dict(staged.args), ENTRY, None),
    ))
    return cfg._replace(
        actors=actors, next_task=cfg.next_task + 1, staged=rest)


def is_complete(cfg):
    # type: (ActorConfig) -> bool
    """Return true if every task in every queue has finished."""
    return not cfg.staged and not _unfinished(cfg)


def detect_deadlock(cfg):
    # type: (ActorConfig) -> bool
    """Return true if nothing can run but some task has not finished."""
    return _unfinished(cfg) and not enabled_tasks(cfg)


def canonical_form(cfg):
    # type: (ActorConfig) -> Tuple
    """Return a value equal for configurations equal up to task renaming.

    Futures are replaced by the signature of the task they name, and
    finished tasks only take part when some future still refers to them.
    """
    tasks = {
        t.id: (actor.id, t)
        for actor in cfg.actors.values() for t in actor.queue
    }
    signatures = {}

    def sig(tid):
        try:
            return signatures[tid]
        except KeyError:
            signatures[tid] = ('cycle',)
        owner, task = tasks.get(tid, (None, None))
        if task is None:
            value = ('unknown',)
        else:
            value = (owner, task.method, canon(task.locals),
                     task.point, canon(task.guard))
        signatures[tid] = value
        return value

    def canon(v):
        if isinstance(v, (Future, FutureGuard)):
            return (type(v).__name__, sig(v.task))
        elif hasattr(v, 'canonical'):
            return v.canonical()
        elif isinstance(v, Enum):
            return v.value
        elif isinstance(v, dict):
            return ('map',) + tuple(sorted(
                ((canon(k), canon(x)) for k, x in v.items()), key=repr))
        elif isinstance(v, (set, frozenset)):
            return ('set',) + tuple(sorted((canon(x) for x in v), key=repr))
        elif isinstance(v, tuple) and hasattr(v, '_fields'):
            return (type(v).__name__,) + tuple(canon(x) for x in v)
        elif isinstance(v, (tuple, list)):
            return tuple(canon(x) for x in v)
        return v

    return (
        tuple(
            (actor.id, actor.kind, canon(actor.heap), tuple(sorted(
                (sig(t.id) for t in actor.queue if t.point != FINISHED),
                key=repr)))
            for actor in sorted(cfg.actors.values(), key=lambda a: a.id)
        ),
        canon(cfg.staged),
    )


def canonical_fingerprint(cfg):
    # type: (ActorConfig) -> str
    """Digest of :func:`canonical_form`."""
    return hashlib.sha1(
        repr(canonical_form(cfg)).encode('utf-8')).hexdigest()


def render(value):
    # type: (Any) -> Any
    """Convert heap values into json-serializable report values."""
    if isinstance(value, Future):
        return 'future({0})'.format(value.task)
    elif isinstance(value, Enum):
        return value.value
    elif isinstance(value, dict):
        return {str(k): render(v) for k, v in sorted(
            value.items(), key=lambda kv: repr(kv[0]))}
    elif isinstance(value, (set, frozenset)):
        return sorted((render(v) for v in value), key=repr)
    elif hasattr(value, '__json__'):
        return value.__json__()
    elif isinstance(value, tuple) and hasattr(value, '_fields'):
        return str(value)
    elif isinstance(value, (tuple, list)):
        return [render(v) for v in value]
    return value


def describe(cfg):
    # type: (ActorConfig) -> List[Dict]
    """Summarize final values of the observable fields of every actor."""
    summary = []
    for actor in sorted(cfg.actors.values(), key=lambda a: a.id):
        fields = _behavior_for(actor.kind).summary_fields
        summary.append({
            'id': actor.id,
            'kind': actor.kind,
            'fields': {
                name: render(actor.heap.get(name))
                for name in fields if name in actor.heap
            },
        })
    return summary
