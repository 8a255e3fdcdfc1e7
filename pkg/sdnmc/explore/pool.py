"""Explorer running branches in a process pool."""
from functools import partial

from billiard import Pool
from vine import barrier, promise

from sdnmc.utils.log import get_logger

from . import base

__all__ = ['Explorer']

logger = get_logger(__name__)


class Explorer(base.ParallelExplorer):
    """Explorer using a :mod:`billiard` process pool.

    Branch results are collected by a :class:`vine.barrier` as workers
    finish them, in any order, and merged in branch order.

    Arguments:
        processes (int): Pool size, default is taken from
            :setting:`SDNMC_PARALLEL`.
    """

    def __init__(self, app=None, processes=None):
        super().__init__(app=app)
        self.processes = (
            processes if processes is not None
            else self.app.settings.SDNMC_PARALLEL)

    def __reduce_keys__(self):
        return {'processes': self.processes}

    def explore_branches(self, payloads):
        results = [None] * len(payloads)
        errors = []
        collected = barrier(callback=promise(
            logger.debug, ('all %d branches done', len(payloads))))
        pool = Pool(min(self.processes, len(payloads)))
        try:
            for i, payload in enumerate(payloads):
                p = promise(partial(self._collect, results, i))
                collected.add(p)
                pool.apply_async(
                    base.explore_branch, (payload,),
                    callback=p, error_callback=errors.append,
                )
            collected.finalize()
            pool.close()
            pool.join()
        except BaseException:
            pool.terminate()
            raise
        if errors:
            raise errors[0]
        assert collected.ready
        return results

    def _collect(self, results, index, value):
        results[index] = base.ExplorationResult.from_dict(value)
