""" Implements a simple wrapper for the serial processing of items.
"""

from typing import Callable, List, Sequence

from load_forecasting.experiments.processing.base_scheduler import ProcessingScheduler
from load_forecasting.experiments.processing.base_scheduler import TProcItem, TProcResult


class SerialProcessingScheduler(ProcessingScheduler):
    """ Processes one item at a time in the calling process. """

    def run(self,
            items: Sequence[TProcItem],
            func: Callable[[TProcItem], TProcResult]) -> List[TProcResult]:
        return [func(item) for item in items]
