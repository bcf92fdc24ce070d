""" Defines a common interface for processing schedulers.

A processing scheduler runs the independent trials of an experiment: the
seeded repetitions of a plan, and the cells of a lag sweep or an ablation.
Schedulers keep the way trials are computed (serially or on several
processes) apart from the experiment logic, which only ever sees results in
submission order.

Attributes:
    TProcItem (TypeVar): Item scheduled for processing by a
        :class:`ProcessingScheduler`.
    TProcResult (TypeVar): Result of processing a :attr:`TProcItem`.
"""

from abc import ABC, abstractmethod
from typing import Callable, List, Sequence, TypeVar

TProcItem = TypeVar("TProcItem")
TProcResult = TypeVar("TProcResult")


class ProcessingScheduler(ABC):
    """ Defines a common interface for processing schedulers. """

    @abstractmethod
    def run(self,
            items: Sequence[TProcItem],
            func: Callable[[TProcItem], TProcResult],
    ) -> List[TProcResult]:
        """ Processes the given items and returns a result.

        Args:
            items (Sequence[TProcItem]): Items to be processed, typically
                trial descriptions.
            func (Callable[[TProcItem], TProcResult]): Callable that takes
                one item and returns its result. Extra arguments can be bound
                with :func:`functools.partial`.

        Returns:
            A list with the result of each item. The ordering of the results
            follows the ordering of `items`, whatever the completion order.
        """
        raise NotImplementedError()

    def close(self):
        """ Releases the resources held by the scheduler. """

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
