"""Tasks used by the Celery explorer."""
from celery import shared_task

from .explore.base import explore_branch as _explore_branch

__all__ = ['explore_branch']


@shared_task
def explore_branch(payload):
    # type: (Dict) -> Dict
    """Explore one branch of a split search tree.

    Note:
        The result is the branch's
        :class:`~sdnmc.explore.base.ExplorationResult` as a dict.
    """
    return _explore_branch(payload)
