"""Explorer running branches as Celery tasks."""
from celery import group

from sdnmc.exceptions import ImproperlyConfigured
from sdnmc.tasks import explore_branch

from . import base

__all__ = ['Explorer']

E_NEEDS_SCENARIO = (
    'The celery explorer ships scenarios to workers, '
    'and cannot explore a bare configuration')


class Explorer(base.ParallelExplorer):
    """Explorer using Celery tasks to explore branches.

    Note:
        Workers rebuild the initial configuration from the scenario,
        so :meth:`explore` must be given the scenario it was built from.
    """

    #: Seconds to wait for all branches, :const:`None` waits forever.
    timeout = None

    def payload(self, cfg0, options, prefix, choice, sleep,
                scenario=None, barriers=None):
        if scenario is None:
            raise ImproperlyConfigured(E_NEEDS_SCENARIO)
        payload = super().payload(cfg0, options, prefix, choice, sleep)
        payload.pop('config')
        payload.update(scenario=scenario.as_dict(), barriers=barriers)
        return payload

    def as_branch_group(self, payloads):
        return group(explore_branch.s(payload) for payload in payloads)

    def explore_branches(self, payloads):
        return [
            base.ExplorationResult.from_dict(value)
            for value in self.as_branch_group(payloads).delay().get(
                timeout=self.timeout)
        ]
