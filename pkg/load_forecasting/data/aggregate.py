""" Hourly, daily, weekly and monthly datasets built from a clean series.

Every dataset is a :class:`ScaleDataset`: a frame indexed by period start whose
columns follow the schema of its scale exactly. The first column is the
consumption target, all others are context factors.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from load_forecasting.data.calendar import DAY, HOUR, HolidayCalendar
from load_forecasting.data.preprocessing import CleanHourlySeries

_logger = logging.getLogger(__name__)

HOURS_PER_DAY = 24
HOURS_PER_WEEK = 168

_WEATHER_STATS = ('temp_max', 'temp_min', 'temp_avg', 'hum_max', 'hum_min', 'hum_avg')

SCHEMAS: Dict[str, Tuple[str, ...]] = {
    'hourly': ('kwh', 'month', 'temp_f', 'humidity_pct', 'hour_of_day', 'day_of_week',
               'is_weekend', 'is_holiday'),
    'daily': ('kwh_total',) + _WEATHER_STATS + ('is_weekend', 'is_holiday'),
    'weekly': ('kwh_total',) + _WEATHER_STATS + ('holiday_count',),
    'monthly': ('kwh_total',) + _WEATHER_STATS + ('weekend_day_count', 'holiday_count'),
}

_AGGREGATIONS = {
    'kwh_total': ('kwh', 'sum'),
    'temp_max': ('temp_f', 'max'),
    'temp_min': ('temp_f', 'min'),
    'temp_avg': ('temp_f', 'mean'),
    'hum_max': ('humidity_pct', 'max'),
    'hum_min': ('humidity_pct', 'min'),
    'hum_avg': ('humidity_pct', 'mean'),
}


class PartialPeriodError(ValueError):
    """ Indicates a series that does not cover whole days or whole months. """


class SeriesTooShortError(ValueError):
    """ Indicates a series shorter than one full period of the scale. """


@dataclass(frozen=True, eq=False)
class ScaleDataset:
    """ Chronologically ordered rows of one scale, indexed by period start. """
    scale: str
    frame: pd.DataFrame

    def __post_init__(self):
        if self.scale not in SCHEMAS:
            raise ValueError(f'unknown scale {self.scale!r}, expected one of {", ".join(SCHEMAS)}')
        if tuple(self.frame.columns) != SCHEMAS[self.scale]:
            raise ValueError(f'{self.scale} rows need columns {",".join(SCHEMAS[self.scale])}, '
                             f'got {",".join(map(str, self.frame.columns))}')
        if not self.frame.index.is_monotonic_increasing or self.frame.index.has_duplicates:
            raise ValueError(f'{self.scale} rows are not in strictly chronological order')

    def __len__(self):
        return len(self.frame)

    @property
    def target_column(self) -> str:
        return SCHEMAS[self.scale][0]

    @property
    def context_columns(self) -> Tuple[str, ...]:
        return SCHEMAS[self.scale][1:]

    @property
    def period_starts(self) -> pd.DatetimeIndex:
        return self.frame.index

    @property
    def target(self) -> np.ndarray:
        return self.frame[self.target_column].to_numpy(dtype=float)

    def to_csv(self, path=None):
        out = self.frame.copy()
        out.index = out.index.strftime('%Y-%m-%dT%H:%M')
        return out.to_csv(path, index_label='period_start')

    @classmethod
    def read_csv(cls, path) -> 'ScaleDataset':
        """ Reads a dataset written by :meth:`to_csv`; the scale is recognised
        from the header.
        """
        frame = pd.read_csv(path, index_col='period_start')
        frame.index = pd.DatetimeIndex(pd.to_datetime(frame.index, format='ISO8601'), name='period_start')
        for scale, columns in SCHEMAS.items():
            if tuple(frame.columns) == columns:
                return cls(scale, frame)
        raise ValueError(f'{path}: header matches no dataset schema')


def _holiday_flags(dates: pd.DatetimeIndex, holidays: HolidayCalendar) -> np.ndarray:
    return np.fromiter((d in holidays for d in dates.date), dtype=int, count=len(dates))


def _daily_flags(series: CleanHourlySeries, holidays: HolidayCalendar) -> pd.DataFrame:
    """ Weekend and holiday indicator per calendar day of the series. """
    days = series.frame.index.normalize().unique()
    return pd.DataFrame({
        'is_weekend': (days.dayofweek >= 5).astype(int),
        'is_holiday': _holiday_flags(days, holidays),
    }, index=days)


def _check_day_aligned(series: CleanHourlySeries):
    if len(series) == 0:
        raise SeriesTooShortError('series is empty')
    if series.start != series.start.normalize() or len(series) % HOURS_PER_DAY:
        raise PartialPeriodError(f'series {series.hour_range} does not cover whole days')


def _finish(scale: str, frame: pd.DataFrame) -> ScaleDataset:
    frame = frame[list(SCHEMAS[scale])]
    frame.index = pd.DatetimeIndex(frame.index, name='period_start')
    _logger.info('built %s dataset: %d rows x %d columns', scale, *frame.shape)
    return ScaleDataset(scale, frame)


def build_hourly(series: CleanHourlySeries, holidays: HolidayCalendar) -> ScaleDataset:
    """ One row per hour with its calendar position and flags. """
    index = series.frame.index
    days = index.normalize()
    frame = series.frame.copy()
    frame['month'] = index.month
    frame['hour_of_day'] = index.hour
    frame['day_of_week'] = index.dayofweek + 1
    frame['is_weekend'] = (index.dayofweek >= 5).astype(int)
    frame['is_holiday'] = _holiday_flags(days, holidays)
    return _finish('hourly', frame)


def build_daily(series: CleanHourlySeries, holidays: HolidayCalendar) -> ScaleDataset:
    """ Sums consumption and summarises weather over each of the 24-hour days.

    Raises:
        PartialPeriodError: if the series does not start at midnight or does
            not cover a whole number of days.
    """
    _check_day_aligned(series)
    frame = series.frame.groupby(pd.Grouper(freq=DAY)).agg(**_AGGREGATIONS)
    frame = frame.join(_daily_flags(series, holidays))
    return _finish('daily', frame)


def build_weekly(series: CleanHourlySeries, holidays: HolidayCalendar) -> ScaleDataset:
    """ Aggregates consecutive 168-hour blocks counted from the first hour of
    the series; a trailing partial week is dropped. `holiday_count` counts the
    distinct holiday dates touched by the hours of each block.

    Raises:
        SeriesTooShortError: if the series is shorter than one week.
    """
    n_weeks = len(series) // HOURS_PER_WEEK
    if n_weeks == 0:
        raise SeriesTooShortError(f'series of {len(series)} hours is shorter than one week')
    dropped = len(series) - n_weeks * HOURS_PER_WEEK
    if dropped:
        _logger.info('dropping trailing partial week of %d hours', dropped)

    hourly = series.frame.iloc[:n_weeks * HOURS_PER_WEEK]
    block = np.arange(len(hourly)) // HOURS_PER_WEEK
    frame = hourly.groupby(block).agg(**_AGGREGATIONS)
    frame.index = hourly.index[::HOURS_PER_WEEK]

    dates = hourly.index.normalize()
    days = pd.DataFrame({'block': block, 'date': dates, 'is_holiday': _holiday_flags(dates, holidays)})
    counts = days.drop_duplicates(['block', 'date']).groupby('block')['is_holiday'].sum()
    frame['holiday_count'] = counts.to_numpy().astype(int)
    return _finish('weekly', frame)


def build_monthly(series: CleanHourlySeries, holidays: HolidayCalendar) -> ScaleDataset:
    """ Aggregates calendar months.

    Raises:
        PartialPeriodError: if the series does not start and end on month
            boundaries.
    """
    _check_day_aligned(series)
    end = series.start + len(series) * HOUR
    for t in (series.start, end):
        if t.day != 1:
            raise PartialPeriodError(f'series {series.hour_range} does not cover whole months')

    frame = series.frame.groupby(pd.Grouper(freq='MS')).agg(**_AGGREGATIONS)
    flags = _daily_flags(series, holidays).resample('MS').sum()
    frame['weekend_day_count'] = flags['is_weekend'].astype(int)
    frame['holiday_count'] = flags['is_holiday'].astype(int)
    return _finish('monthly', frame)


BUILDERS = {
    'hourly': build_hourly,
    'daily': build_daily,
    'weekly': build_weekly,
    'monthly': build_monthly,
}


def build_dataset(scale: str, series: CleanHourlySeries, holidays: HolidayCalendar) -> ScaleDataset:
    try:
        builder = BUILDERS[scale]
    except KeyError:
        raise ValueError(f'unknown scale {scale!r}, expected one of {", ".join(BUILDERS)}') from None
    return builder(series, holidays)
