"""Sequential explorer.

Stateless exploration of macro-step interleavings with dynamic
partial-order reduction over source sets: an arbitrary first
interleaving is executed, and every race between a step and an earlier
dependent step makes sure that one task able to start the reversed
order is scheduled at the node of the earlier step.  Sleep sets keep
already covered reorderings from being explored twice.

Happens-before is tracked with one clock per step of the current path,
a bitmask of the path indices the step depends on.  A step depends on
the previous step of its task, on the step that spawned its task, on
the last write to the condition it awaited, and on every earlier step it
conflicts with.  A staged injection depends on every step taken before
it was released.
"""
import random

from collections import namedtuple
from itertools import chain
from time import monotonic

from sdnmc._state import app_or_default
from sdnmc.actors import (
    Spawn, Violation, canonical_fingerprint, describe, enabled_tasks,
    execute, is_complete, settle,
)
from sdnmc.exceptions import (
    ImproperlyConfigured, InstanceTooLarge, NotEnabled, ReplayError,
)
from sdnmc.properties import monitors_for
from sdnmc.utils.log import get_logger

from .independence import (
    ACTOR, conflicts, ensure_level, footprint_of, guard_regions,
)

__all__ = [
    'FULL', 'PROPERTY', 'MODES',
    'ExplorationOptions', 'ExplorationResult', 'TraceEvent',
    'Counterexample', 'DPOR', 'Explorer',
    'explore', 'enumerate_all', 'replay', 'split', 'explore_branch',
]

E_UNKNOWN_MODE = 'Unknown exploration mode {0!r} ({1} only)'
E_MAX_DEPTH = 'max_depth must be a positive integer, not {0!r}'
E_PACKET_BOUND = 'packet_bound must be at least 1, not {0!r}'
E_PROBABILITY = 'debug_commutation must be between 0 and 1, not {0!r}'
E_REPLAY = 'Choice {1!r} at step {0} is not enabled'
E_TOO_LARGE = (
    'Instance too large for exhaustive enumeration: '
    '{0} actors (max {1}), {2} packets (max {3})')

FULL, PROPERTY = 'full', 'property'
MODES = (FULL, PROPERTY)

#: Method of the tasks injecting packets.
INJECTION_METHOD = 'sendIn'

logger = get_logger(__name__)


class ExplorationOptions(namedtuple('ExplorationOptions', (
        'mode', 'independence', 'max_depth', 'packet_bound',
        'properties', 'debug_commutation', 'seed'))):
    """Options for one exploration.

    Raises:
        ~sdnmc.exceptions.ImproperlyConfigured: for invalid values.
    """

    __slots__ = ()

    def __new__(cls, mode=FULL, independence=ACTOR, max_depth=400,
                packet_bound=8, properties=(), debug_commutation=0.0,
                seed=0):
        mode = str(mode).lower()
        if mode not in MODES:
            raise ImproperlyConfigured(
                E_UNKNOWN_MODE.format(mode, ', '.join(MODES)))
        if int(max_depth) <= 0:
            raise ImproperlyConfigured(E_MAX_DEPTH.format(max_depth))
        if int(packet_bound) < 1:
            raise ImproperlyConfigured(E_PACKET_BOUND.format(packet_bound))
        if not 0.0 <= float(debug_commutation) <= 1.0:
            raise ImproperlyConfigured(E_PROBABILITY.format(debug_commutation))
        return super().__new__(
            cls, mode, ensure_level(independence), int(max_depth),
            int(packet_bound), tuple(properties), float(debug_commutation),
            int(seed))

    @classmethod
    def resolve(cls, settings, scenario=None, **overrides):
        # type: (Settings, ScenarioFile, **Any) -> ExplorationOptions
        """Options from settings, then the scenario, then ``overrides``.

        Overrides that are :const:`None` are ignored.
        """
        values = {
            'mode': settings.SDNMC_MODE,
            'independence': settings.SDNMC_INDEPENDENCE,
            'max_depth': settings.SDNMC_MAX_DEPTH,
            'packet_bound': settings.SDNMC_PACKET_BOUND,
            'debug_commutation': settings.SDNMC_DEBUG_COMMUTATION,
            'seed': settings.SDNMC_SEED,
        }
        if scenario is not None:
            values.update(
                (k, v) for k, v in scenario.exploration.items()
                if k in cls._fields and v is not None)
            values['properties'] = scenario.properties
        values.update(
            (k, v) for k, v in overrides.items() if v is not None)
        return cls(**values)

    def as_dict(self):
        return dict(self._asdict(), properties=list(self.properties))

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class TraceEvent(namedtuple('TraceEvent', (
        'index', 'actor', 'task', 'method',
        'spawns', 'writes', 'events', 'violations'))):
    """One step of a reported execution."""

    __slots__ = ()

    @classmethod
    def from_step(cls, index, step):
        # type: (int, Step) -> TraceEvent
        return cls(
            index, step.actor, step.task, step.method,
            tuple(step.spawns),
            tuple(sorted(
                ':'.join(str(x) for x in region)
                for region in step.footprint.writes if region[0] is not None
            )),
            tuple((e.name,) + tuple(e.args) for e in step.events),
            tuple(step.violations),
        )

    @property
    def choice(self):
        return (self.actor, self.task)

    def as_dict(self):
        return {
            'index': self.index,
            'actor': self.actor,
            'task': self.task,
            'method': self.method,
            'spawns': [list(s) for s in self.spawns],
            'writes': list(self.writes),
            'events': [list(e) for e in self.events],
            'violations': [list(v) for v in self.violations],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            d['index'], d['actor'], d['task'], d['method'],
            tuple(Spawn(*s) for s in d['spawns']),
            tuple(d['writes']),
            tuple(tuple(e) for e in d['events']),
            tuple(Violation(*v) for v in d['violations']),
        )

    def __str__(self):
        spawns = ', '.join(
            '{0}!{1}#{2}'.format(s.actor, s.method, s.task)
            for s in self.spawns)
        return '{0:>3}: {1}.{2}#{3}{4}'.format(
            self.index, self.actor, self.method, self.task,
            ' -> ' + spawns if spawns else '')


#: A violation with the execution that exhibits it.
Counterexample = namedtuple('Counterexample', ('violation', 'trace'))


class ExplorationResult:
    """Counts, violations and final states of an exploration.

    Results of disjoint parts of a search tree combine with
    :meth:`merge`: counts add up, final states are united and
    violations concatenated.
    """

    def __init__(self, executions=0, states=0, deadlocks=0, truncated=0,
                 violations=None, finals=None, commutation_checks=0,
                 commutation_failures=None, elapsed=0.0, stopped=False):
        self.executions = executions
        self.states = states
        self.deadlocks = deadlocks
        self.truncated = truncated
        self.violations = list(violations or [])
        #: final state fingerprint -> actor summary
        self.finals = dict(finals or {})
        self.commutation_checks = commutation_checks
        self.commutation_failures = list(commutation_failures or [])
        self.elapsed = elapsed
        self.stopped = stopped
        #: fingerprint -> configuration, filled by :func:`enumerate_all`
        #: when asked to collect final configurations.
        self.final_configs = {}

    @property
    def final_fingerprints(self):
        # type: () -> Set[str]
        return set(self.finals)

    def merge(self, other):
        # type: (ExplorationResult) -> ExplorationResult
        return type(self)(
            executions=self.executions + other.executions,
            states=self.states + other.states,
            deadlocks=self.deadlocks + other.deadlocks,
            truncated=self.truncated + other.truncated,
            violations=self.violations + other.violations,
            finals=dict(self.finals, **other.finals),
            commutation_checks=(
                self.commutation_checks + other.commutation_checks),
            commutation_failures=(
                self.commutation_failures + other.commutation_failures),
            elapsed=max(self.elapsed, other.elapsed),
            stopped=self.stopped or other.stopped,
        )

    def as_dict(self):
        return {
            'executions': self.executions,
            'states': self.states,
            'deadlocks': self.deadlocks,
            'truncated': self.truncated,
            'violations': [
                {'violation': list(c.violation),
                 'trace': [e.as_dict() for e in c.trace]}
                for c in self.violations
            ],
            'finals': self.finals,
            'commutation_checks': self.commutation_checks,
            'commutation_failures': [
                list(v) for v in self.commutation_failures],
            'elapsed': self.elapsed,
            'stopped': self.stopped,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            executions=d['executions'],
            states=d['states'],
            deadlocks=d['deadlocks'],
            truncated=d['truncated'],
            violations=[
                Counterexample(
                    Violation(*c['violation']),
                    tuple(TraceEvent.from_dict(e) for e in c['trace']))
                for c in d['violations']
            ],
            finals=d['finals'],
            commutation_checks=d['commutation_checks'],
            commutation_failures=[
                Violation(*v) for v in d['commutation_failures']],
            elapsed=d['elapsed'],
            stopped=d['stopped'],
        )

    def __repr__(self):
        return '<{0}: {1} executions, {2} states, {3} violations>'.format(
            type(self).__name__, self.executions, self.states,
            len(self.violations))


class _Frame:
    """Search node: the configuration before the step taken from it."""

    __slots__ = ('cfg', 'enabled', 'sleep', 'backtrack', 'done', 'frozen')

    def __init__(self, cfg, enabled, sleep=(), frozen=False):
        self.cfg = cfg
        self.enabled = enabled
        self.sleep = frozenset(sleep)
        self.backtrack = set()
        self.done = set()
        # frozen nodes are expanded elsewhere (parallel branches).
        self.frozen = frozen


class DPOR:
    """One depth-first exploration with partial-order reduction."""

    def __init__(self, cfg0, options, monitors=None):
        # type: (ActorConfig, ExplorationOptions, MonitorSet) -> None
        self.cfg0 = cfg0
        self.options = options
        self.level = options.independence
        self.monitors = (
            monitors if monitors is not None
            else monitors_for(options.properties, cfg0))
        self.random = random.Random(options.seed)
        self.result = ExplorationResult()
        self.frames = []
        self.steps = []
        self.clocks = []
        self.task_clocks = [{}]
        self.stopped = False

    def run(self):
        # type: () -> ExplorationResult
        start = monotonic()
        self._visit(settle(self.cfg0), {})
        return self._done(start)

    def run_branch(self, prefix, choice, sleep=()):
        # type: (Sequence, Tuple[int, int], Sequence) -> ExplorationResult
        """Explore the subtree below ``prefix`` that starts with ``choice``.

        The nodes of the prefix and the node ``choice`` is taken from
        are neither counted nor backtracked: they belong to the caller.
        """
        start = monotonic()
        cfg = settle(self.cfg0)
        for c in prefix:
            self.frames.append(_Frame(cfg, enabled_tasks(cfg), frozen=True))
            cfg, _ = self._push(cfg, tuple(c))
        enabled = enabled_tasks(cfg)
        self._visit(cfg, {
            tuple(q): footprint_of(cfg, tuple(q), enabled) for q in sleep
        }, first=tuple(choice))
        return self._done(start)

    def _done(self, start):
        result = self.result
        result.elapsed = monotonic() - start
        result.stopped = self.stopped
        if result.truncated:
            logger.warning('max depth %d reached on %d branches',
                           self.options.max_depth, result.truncated)
        return result

    def _visit(self, cfg, sleep, first=None):
        frozen = first is not None
        if not frozen:
            self.result.states += 1
        enabled = enabled_tasks(cfg)
        frame = _Frame(cfg, enabled, sleep, frozen=frozen)
        self.frames.append(frame)
        try:
            if not enabled:
                return self._end_execution(cfg, terminal=True)
            if len(self.steps) >= self.options.max_depth:
                return self._end_execution(cfg, terminal=False)
            if self.options.debug_commutation:
                self._sample_commutation(cfg, enabled)
            ready = sorted(c for c in enabled if c not in sleep)
            if not ready:
                # every enabled task sleeps: covered by another branch.
                return
            frame.backtrack.add(first if frozen else ready[0])
            explored = []
            while not self.stopped:
                todo = sorted(frame.backtrack - frame.done - set(sleep))
                if not todo:
                    break
                choice = todo[0]
                frame.done.add(choice)
                cfg2, step = self._push(cfg, choice)
                try:
                    child_sleep = {
                        q: fp for q, fp in chain(sleep.items(), explored)
                        if not conflicts(fp, step.footprint, self.level, cfg)
                    }
                    for v in step.violations:
                        self._report(v)
                    if not self.stopped:
                        self._visit(cfg2, child_sleep)
                finally:
                    self._pop()
                explored.append((choice, step.footprint))
        finally:
            self.frames.pop()

    def _push(self, cfg, choice):
        regions = guard_regions(cfg, choice)
        cfg2, step = execute(cfg, choice)
        released = cfg2.next_task
        cfg2 = settle(cfg2)
        index = len(self.steps)
        tclocks = self.task_clocks[-1]
        clock = tclocks.get(step.task, 0)
        if regions:
            # whatever made the await hold comes first.
            j = self._last_writer(regions)
            if j is not None:
                clock |= self.clocks[j]
        races = []
        for j in range(index - 1, -1, -1):
            if clock >> j & 1:
                continue
            if conflicts(self.steps[j].footprint, step.footprint,
                         self.level, self.frames[j].cfg):
                # not ordered through any later step: a race.
                races.append(j)
                clock |= self.clocks[j]
        clock |= 1 << index
        for j in races:
            self._reverse(j, choice, clock)
        tclocks = dict(tclocks)
        tclocks[step.task] = clock
        for spawn in step.spawns:
            tclocks[spawn.task] = clock
        if cfg2.next_task != released:
            # a staged injection waits for every step taken so far.
            everything = (1 << (index + 1)) - 1
            for tid in range(released, cfg2.next_task):
                tclocks[tid] = everything
        self.steps.append(step)
        self.clocks.append(clock)
        self.task_clocks.append(tclocks)
        return cfg2, step

    def _pop(self):
        self.steps.pop()
        self.clocks.pop()
        self.task_clocks.pop()

    def _last_writer(self, regions):
        for j in range(len(self.steps) - 1, -1, -1):
            if self.steps[j].footprint.writes & regions:
                return j

    def _reverse(self, i, choice, clock):
        """Schedule the reversal of the race between step ``i`` and ``choice``.

        The reversed order runs the steps after ``i`` that do not depend
        on it, then ``choice``.  A task whose first step there depends
        on none of the others can start it from the node of step ``i``;
        nothing is added when one of them is already scheduled there.
        """
        frame = self.frames[i]
        if frame.frozen:
            return
        later = range(i + 1, len(self.steps))
        rest = 0
        for k in later:
            if not self.clocks[k] >> i & 1:
                rest |= 1 << k
        initials = {
            (self.steps[k].actor, self.steps[k].task) for k in later
            if rest >> k & 1 and not self.clocks[k] & rest & ~(1 << k)
        }
        if not clock & rest:
            initials.add(choice)
        initials &= frame.enabled
        if not initials:
            frame.backtrack.update(frame.enabled)
        elif not initials & frame.backtrack:
            frame.backtrack.add(min(initials - frame.sleep or initials))

    def _end_execution(self, cfg, terminal=True):
        result = self.result
        result.executions += 1
        if terminal:
            if not is_complete(cfg):
                result.deadlocks += 1
            fingerprint = canonical_fingerprint(cfg)
            if fingerprint not in result.finals:
                result.finals[fingerprint] = describe(cfg)
            for v in self.monitors.on_final(cfg):
                self._report(v)
        else:
            result.truncated += 1
        for v in self.monitors.on_execution(self.steps):
            self._report(v)
        logger.debug('execution %d: %d steps%s', result.executions,
                     len(self.steps), '' if terminal else ' (truncated)')

    def _report(self, violation):
        if self.stopped:
            return
        logger.info('violation %s', violation)
        self.result.violations.append(Counterexample(violation, self.trace()))
        if self.options.mode == PROPERTY:
            self.stopped = True

    def trace(self):
        # type: () -> Tuple[TraceEvent, ...]
        return tuple(
            TraceEvent.from_step(i, step) for i, step in enumerate(self.steps))

    def _sample_commutation(self, cfg, enabled):
        if len(enabled) < 2 or (
                self.random.random() >= self.options.debug_commutation):
            return
        a, b = self.random.sample(sorted(enabled), 2)
        fa, fb = footprint_of(cfg, a, enabled), footprint_of(cfg, b, enabled)
        if conflicts(fa, fb, self.level, cfg):
            return
        self.result.commutation_checks += 1
        if _run_pair(cfg, a, b) != _run_pair(cfg, b, a):
            v = Violation(
                'commutation', '{0}/{1}'.format(a, b),
                'independent steps do not commute at depth {0}'.format(
                    len(self.steps)))
            logger.error('%s', v)
            self.result.commutation_failures.append(v)


def _run_pair(cfg, first, second):
    cfg = settle(execute(cfg, first)[0])
    return canonical_fingerprint(settle(execute(cfg, second)[0]))


def explore(cfg0, options):
    # type: (ActorConfig, ExplorationOptions) -> ExplorationResult
    """Explore every interleaving class of ``cfg0``."""
    result = DPOR(cfg0, options).run()
    logger.info('explored %d executions, %d states in %.3fs',
                result.executions, result.states, result.elapsed)
    return result


def _injected(cfg):
    return len(cfg.staged) + sum(
        1 for actor in cfg.actors.values() for t in actor.queue
        if t.method == INJECTION_METHOD)


def enumerate_all(cfg0, options, collect=False,
                  max_actors=None, max_packets=None, app=None):
    # type: (ActorConfig, ExplorationOptions, bool, int, int, Checker) -> ExplorationResult
    """Run every interleaving, without any reduction.

    Subtrees of configurations already met with the same remaining
    depth are counted once and reused, so counts are those of the
    full tree.

    Raises:
        ~sdnmc.exceptions.InstanceTooLarge: if the instance has more
            actors or packets than the size guard allows.
    """
    if max_actors is None or max_packets is None:
        settings = app_or_default(app).settings
        if max_actors is None:
            max_actors = settings.SDNMC_ENUMERATE_MAX_ACTORS
        if max_packets is None:
            max_packets = settings.SDNMC_ENUMERATE_MAX_PACKETS
    cfg0 = settle(cfg0)
    packets = _injected(cfg0)
    if len(cfg0.actors) > max_actors or packets > max_packets:
        raise InstanceTooLarge(E_TOO_LARGE.format(
            len(cfg0.actors), max_actors, packets, max_packets))

    start = monotonic()
    memo = {}
    configs = {}

    def count(cfg, budget):
        fingerprint = canonical_fingerprint(cfg)
        key = (fingerprint, budget)
        try:
            return memo[key]
        except KeyError:
            pass
        enabled = sorted(enabled_tasks(cfg))
        if not enabled:
            configs.setdefault(fingerprint, cfg)
            value = (1, 1, 0 if is_complete(cfg) else 1, 0,
                     frozenset({fingerprint}))
        elif not budget:
            value = (1, 1, 0, 1, frozenset())
        else:
            states, executions, deadlocks, truncated = 1, 0, 0, 0
            finals = set()
            for choice in enabled:
                s, e, d, t, f = count(
                    settle(execute(cfg, choice)[0]), budget - 1)
                states += s
                executions += e
                deadlocks += d
                truncated += t
                finals |= f
            value = (states, executions, deadlocks, truncated,
                     frozenset(finals))
        memo[key] = value
        return value

    states, executions, deadlocks, truncated, finals = count(
        cfg0, options.max_depth)
    result = ExplorationResult(
        executions=executions, states=states,
        deadlocks=deadlocks, truncated=truncated)
    monitors = monitors_for(options.properties)
    for fingerprint in sorted(finals):
        cfg = configs[fingerprint]
        result.finals[fingerprint] = describe(cfg)
        for v in monitors.on_final(cfg):
            result.violations.append(Counterexample(v, ()))
        if collect:
            result.final_configs[fingerprint] = cfg
    result.elapsed = monotonic() - start
    logger.info('enumerated %d executions, %d states in %.3fs',
                executions, states, result.elapsed)
    return result


def replay(cfg0, choices, steps=False):
    # type: (ActorConfig, Sequence[Tuple[int, int]], bool) -> ActorConfig
    """Run the given choices from ``cfg0``.

    Returns:
        ActorConfig: the final configuration, or a tuple of it and the
            step records if ``steps`` is set.

    Raises:
        ~sdnmc.exceptions.ReplayError: naming the index of the first
            choice that is not enabled.
    """
    cfg, taken = settle(cfg0), []
    for index, choice in enumerate(choices):
        try:
            cfg, step = execute(cfg, tuple(choice))
        except NotEnabled:
            raise ReplayError(E_REPLAY.format(index, tuple(choice)),
                              index=index)
        cfg = settle(cfg)
        taken.append(step)
    return (cfg, taken) if steps else cfg


def split(cfg0):
    # type: (ActorConfig) -> Tuple[List, ActorConfig, List, List]
    """Follow the forced prefix of ``cfg0`` up to its first choice point.

    Returns:
        Tuple: prefix choices, configuration at the choice point, its
            enabled tasks in exploration order, and the prefix steps.
    """
    cfg, prefix, steps = settle(cfg0), [], []
    while True:
        enabled = sorted(enabled_tasks(cfg))
        if len(enabled) != 1:
            return prefix, cfg, enabled, steps
        cfg, step = execute(cfg, enabled[0])
        cfg = settle(cfg)
        prefix.append(enabled[0])
        steps.append(step)


def explore_branch(payload, app=None):
    # type: (Mapping, Checker) -> Dict
    """Explore one branch of a split search tree.

    The payload carries either the initial configuration itself
    (``config``) or a scenario description (``scenario`` and
    ``barriers``) to rebuild it from, along with ``options``,
    ``prefix``, ``choice`` and ``sleep``.
    """
    options = ExplorationOptions.from_dict(payload['options'])
    cfg0 = payload.get('config')
    if cfg0 is None:
        app = app_or_default(app)
        scenario = app.ScenarioFile.from_dict(payload['scenario'])
        cfg0 = scenario.build(barriers=payload.get('barriers'),
                              options=options)
    return DPOR(cfg0, options).run_branch(
        payload['prefix'], payload['choice'], payload['sleep'],
    ).as_dict()


class Explorer:
    """Sequential explorer backend."""

    app = None

    def __init__(self, app=None):
        self.app = app_or_default(app or self.app)

    def __reduce_keys__(self):
        return {}

    def explore(self, cfg0, options, scenario=None, barriers=None):
        # type: (ActorConfig, ExplorationOptions, ScenarioFile, bool) -> ExplorationResult
        return explore(cfg0, options)

    def enumerate_all(self, cfg0, options, collect=False):
        # type: (ActorConfig, ExplorationOptions, bool) -> ExplorationResult
        return enumerate_all(cfg0, options, collect=collect, app=self.app)

    def replay(self, cfg0, choices):
        return replay(cfg0, choices)


class ParallelExplorer(Explorer):
    """Base class for explorers running branches concurrently.

    The forced prefix is run here, then every task enabled at the first
    choice point becomes one branch, with the earlier branches as its
    sleep set.
    """

    def explore(self, cfg0, options, scenario=None, barriers=None):
        start = monotonic()
        prefix, cfg, enabled, steps = split(cfg0)
        if len(enabled) < 2 or len(prefix) >= options.max_depth:
            return explore(cfg0, options)
        head = self._prefix_result(prefix, steps, options)
        if head.stopped:
            return head
        payloads = [
            self.payload(cfg0, options, prefix, choice, enabled[:i],
                         scenario=scenario, barriers=barriers)
            for i, choice in enumerate(enabled)
        ]
        logger.info('exploring %d branches after %d forced steps',
                    len(payloads), len(prefix))
        result = head
        for branch in self.explore_branches(payloads):
            result = result.merge(branch)
        if options.mode == PROPERTY:
            result.violations = result.violations[:1]
        result.elapsed = monotonic() - start
        logger.info('explored %d executions, %d states in %.3fs',
                    result.executions, result.states, result.elapsed)
        return result

    def _prefix_result(self, prefix, steps, options):
        result = ExplorationResult(states=len(prefix) + 1)
        for index, step in enumerate(steps):
            for v in step.violations:
                result.violations.append(Counterexample(v, tuple(
                    TraceEvent.from_step(i, s)
                    for i, s in enumerate(steps[:index + 1]))))
                if options.mode == PROPERTY:
                    result.stopped = True
                    return result
        return result

    def payload(self, cfg0, options, prefix, choice, sleep,
                scenario=None, barriers=None):
        return {
            'config': cfg0,
            'options': options.as_dict(),
            'prefix': [list(c) for c in prefix],
            'choice': list(choice),
            'sleep': [list(c) for c in sleep],
        }

    def explore_branches(self, payloads):
        # type: (Sequence[Dict]) -> Iterable[ExplorationResult]
        raise NotImplementedError('subclass responsibility')
