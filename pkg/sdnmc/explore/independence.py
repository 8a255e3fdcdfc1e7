"""Independence of macro-steps.

Two steps are dependent when one writes a heap region the other reads
or writes.  The levels differ in how finely flow-table regions are told
apart and in which extra commutations they accept:

- ``naive``: any two steps of the same actor are dependent.
- ``actor``: the whole flow table is one region.
- ``entry``: one region per match field.
- ``context``: as ``entry``, and in addition two installs of the same
  entry commute, and so does an install with a lookup that a higher
  priority entry already shadows.
"""
from sdnmc.actors import (
    Footprint, FutureGuard, behaviors, enabled_tasks, execute,
)
from sdnmc.exceptions import ImproperlyConfigured

__all__ = [
    'NAIVE', 'ACTOR', 'ENTRY', 'CONTEXT', 'LEVELS',
    'conflicts', 'dependent', 'footprint_of', 'guard_regions',
    'ensure_level',
]

E_UNKNOWN_LEVEL = 'Unknown independence level {0!r} ({1} only)'

NAIVE, ACTOR, ENTRY, CONTEXT = 'naive', 'actor', 'entry', 'context'
LEVELS = (NAIVE, ACTOR, ENTRY, CONTEXT)


def ensure_level(level):
    # type: (str) -> str
    level = str(level).lower()
    if level not in LEVELS:
        raise ImproperlyConfigured(
            E_UNKNOWN_LEVEL.format(level, ', '.join(LEVELS)))
    return level


def _coarse(region):
    if len(region) > 2 and region[1] == 'flowT':
        return region[:2]
    return region


def conflicts(fp1, fp2, level=ENTRY, pre=None):
    # type: (Footprint, Footprint, str, ActorConfig) -> bool
    """Return true if the steps with these footprints may not commute.

    Arguments:
        pre (ActorConfig): Configuration before the earlier of the two
            steps.  Only used by the ``context`` level.
    """
    if level == NAIVE and fp1.actor == fp2.actor:
        return True
    if level in (NAIVE, ACTOR):
        r1, w1 = set(map(_coarse, fp1.reads)), set(map(_coarse, fp1.writes))
        r2, w2 = set(map(_coarse, fp2.reads)), set(map(_coarse, fp2.writes))
    else:
        r1, w1, r2, w2 = fp1.reads, fp1.writes, fp2.reads, fp2.writes
    shared = (w1 & (r2 | w2)) | (w2 & r1)
    if not shared:
        return False
    if level != CONTEXT:
        return True
    return any(not _commutes(region, fp1, fp2, pre) for region in shared)


def _commutes(region, fp1, fp2, pre):
    if len(region) < 3 or region[1] != 'flowT':
        return False
    i1, i2 = fp1.installs.get(region), fp2.installs.get(region)
    if i1 is not None and i2 is not None:
        # same entry installed twice.
        return i1 == i2
    install = i1 if i1 is not None else i2
    if install is None or pre is None:
        return False
    actor = pre.actors.get(region[0])
    if actor is None:
        return False
    # a strictly higher entry shadows the install for every lookup.
    return actor.heap['flowT'].has_priority_above(region[2], install[0])


def _find(cfg, choice):
    actor = cfg.actors[choice[0]]
    for task in actor.queue:
        if task.id == choice[1]:
            return actor, task


def guard_regions(cfg, choice):
    # type: (ActorConfig, Tuple[int, int]) -> FrozenSet[Tuple]
    """Regions read by the await the task is suspended on."""
    actor, task = _find(cfg, choice)
    guard = task.guard
    if guard is None:
        return frozenset()
    if isinstance(guard, FutureGuard):
        return frozenset({(None, 'done', guard.task)})
    return frozenset({behaviors[actor.kind].guard_region(actor.id, guard)})


def footprint_of(cfg, choice, enabled=None):
    # type: (ActorConfig, Tuple[int, int], FrozenSet) -> Footprint
    """Footprint of the next step of a pending task.

    Enabled tasks are run on a copy of the configuration, suspended
    tasks only read the regions of their await.
    """
    if enabled is None:
        enabled = enabled_tasks(cfg)
    if choice in enabled:
        return execute(cfg, choice)[1].footprint
    return Footprint(choice[0], choice[1],
                     guard_regions(cfg, choice), frozenset(), {})


def dependent(t1, t2, cfg, level=ACTOR):
    # type: (Tuple[int, int], Tuple[int, int], ActorConfig, str) -> bool
    """Return true if two pending tasks may not commute at ``cfg``."""
    level = ensure_level(level)
    enabled = enabled_tasks(cfg)
    return conflicts(
        footprint_of(cfg, t1, enabled), footprint_of(cfg, t2, enabled),
        level, pre=cfg)
