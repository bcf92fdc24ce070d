import os
from functools import lru_cache

import pandas as pd

from load_forecasting.data.aggregate import ScaleDataset, build_dataset
from load_forecasting.data.calendar import HourRange
from load_forecasting.data.preprocessing import CleanHourlySeries
from load_forecasting.data.synthetic import SynthConfig, ground_truth

FIXTURES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'fixtures')


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES_DIR, name)


def day_range(start: str, days: int) -> HourRange:
    first = pd.Timestamp(start)
    return HourRange(first, first + pd.Timedelta(days=days))


def synth_config(start: str = '2016-01-01', days: int = 730, **overrides) -> SynthConfig:
    return SynthConfig(hour_range=day_range(start, days), **overrides)


@lru_cache(maxsize=None)
def synthetic_series(start: str = '2016-01-01', days: int = 730, **overrides) -> CleanHourlySeries:
    """ Clean synthetic series, shared between tests (treat as read-only). """
    return ground_truth(synth_config(start, days, **overrides))


@lru_cache(maxsize=None)
def synthetic_dataset(scale: str, start: str = '2016-01-01', days: int = 730, **overrides) -> ScaleDataset:
    config = synth_config(start, days, **overrides)
    return build_dataset(scale, ground_truth(config), config.calendar)
