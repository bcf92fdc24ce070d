""" Imports core names of :mod:`load_forecasting.experiments.processing`.
"""

from load_forecasting.experiments.processing.base_scheduler import ProcessingScheduler
from load_forecasting.experiments.processing.pool_processing import PoolProcessingScheduler
from load_forecasting.experiments.processing.serial_processing import SerialProcessingScheduler


def make_scheduler(jobs: int = 1) -> ProcessingScheduler:
    """ Serial scheduler for one job, a process pool of `jobs` workers otherwise. """
    if jobs < 1:
        raise ValueError(f'jobs must be >= 1, got {jobs}')
    if jobs == 1:
        return SerialProcessingScheduler()
    return PoolProcessingScheduler(num_processes=jobs)
