""" Implements a processing scheduler that uses
:py:class:`multiprocessing.Pool`.

Note that both the items and the function must be picklable.
"""

import logging
import multiprocessing
from typing import Callable, List, Optional, Sequence

import torch

from load_forecasting.experiments.processing.base_scheduler import ProcessingScheduler
from load_forecasting.experiments.processing.base_scheduler import TProcItem, TProcResult

_logger = logging.getLogger(__name__)


def _init_worker():
    # one intra-op thread per worker
    torch.set_num_threads(1)


class PoolProcessingScheduler(ProcessingScheduler):
    """ Processing scheduler that uses Python's
    :py:class:`multiprocessing.Pool`.

    Workers are started with the ``spawn`` method, so they never inherit
    torch's state from a forked parent. Results are identical to those of
    :class:`.SerialProcessingScheduler`: every trial seeds its own generators.

    Args:
        num_processes (Optional[int]): Number of worker processes to use. If
            `None`, then the number returned by :py:func:`os.cpu_count()` is
            used.
        chunksize (Optional[int]): Approximate number of items sent to a
            worker at once by :py:meth:`.Pool.map`.
    """

    def __init__(self,
                 num_processes: Optional[int] = None,
                 chunksize: Optional[int] = None) -> None:
        self._num_processes = num_processes
        self._chunksize = chunksize
        context = multiprocessing.get_context('spawn')
        self._pool = context.Pool(processes=num_processes, initializer=_init_worker)
        _logger.debug('started a pool of %s worker processes', num_processes or 'cpu_count')

    def run(self,
            items: Sequence[TProcItem],
            func: Callable[[TProcItem], TProcResult]) -> List[TProcResult]:
        return self._pool.map(func, items, chunksize=self._chunksize)

    def close(self):
        """ Closes the pool and waits for its workers to exit. """
        self._pool.close()
        self._pool.join()
