""" Deterministic synthetic smart-meter data with known ground truth.

Consumption is a linear combination of temperature, weekend and holiday
indicators, a diurnal and a seasonal profile, plus Gaussian noise::

    kwh(t) = base + temp_coeff * temp(t) + weekend_coeff * is_weekend(t)
             + holiday_coeff * is_holiday(t) + daily_amplitude * diurnal(t)
             + seasonal_amplitude * seasonal(t) + noise

Temperature follows a seasonal cosine peaking in late July, a diurnal cosine
peaking mid-afternoon and a per-day anomaly; humidity moves against the
diurnal temperature cycle. The clean values form the ground truth; the
emitted files then lose random hours and blocks of hours, and random values
are overwritten by the sentinel.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from load_forecasting.core.constants import RANGE_END, RANGE_START, SEED, SENTINEL
from load_forecasting.data.calendar import HolidayCalendar, HourRange, format_holidays, texas_holidays
from load_forecasting.data.ingest import FIELDS, TIMESTAMP_FORMAT, format_timestamp
from load_forecasting.data.preprocessing import CleanHourlySeries

_logger = logging.getLogger(__name__)

TEMP_MEAN_F = 68.0
TEMP_SEASONAL_F = 18.0
TEMP_DIURNAL_F = 8.0
HUMIDITY_MEAN = 60.0
HUMIDITY_DIURNAL = 15.0
# weather sensors are noisier than the meter
WEATHER_NOISE_FACTOR = 4.0
# clear hours kept around every block gap
BLOCK_MARGIN_HOURS = 48

FILE_NAMES = {
    'consumption': 'consumption.csv',
    'weather': 'weather.csv',
    'holidays': 'holidays.txt',
    'ground_truth': 'ground_truth.csv',
    'injection_log': 'injection_log.json',
}


@dataclass(frozen=True)
class SynthConfig:
    hour_range: HourRange = field(default_factory=lambda: HourRange(RANGE_START, RANGE_END))
    base_kwh: float = 0.5
    # kWh per degree Fahrenheit
    temp_coeff: float = 0.05
    weekend_coeff: float = 0.3
    holiday_coeff: float = 0.4
    daily_amplitude: float = 0.4
    seasonal_amplitude: float = 0.2
    noise_sd: float = 0.05
    seed: int = SEED
    gap_rate: float = 0.0
    sentinel_rate: float = 0.0
    block_gap_count: int = 0
    block_gap_hours: int = 6
    # standard deviation of the daily temperature anomaly, degrees Fahrenheit
    weather_variability: float = 5.0
    holidays: Optional[HolidayCalendar] = None

    def __post_init__(self):
        if self.noise_sd < 0:
            raise ValueError(f'noise_sd must be >= 0, got {self.noise_sd}')
        if self.weather_variability < 0:
            raise ValueError(f'weather_variability must be >= 0, got {self.weather_variability}')
        for name in ('gap_rate', 'sentinel_rate'):
            rate = getattr(self, name)
            if not 0 <= rate < 1:
                raise ValueError(f'{name} must lie in [0, 1), got {rate}')
        if self.block_gap_count < 0:
            raise ValueError(f'block_gap_count must be >= 0, got {self.block_gap_count}')
        if self.block_gap_hours < 2:
            raise ValueError(f'block_gap_hours must be >= 2, got {self.block_gap_hours}')
        if self.seed < 0:
            raise ValueError(f'seed must be unsigned, got {self.seed}')

    @property
    def calendar(self) -> HolidayCalendar:
        if self.holidays is not None:
            return self.holidays
        years = range(self.hour_range.start.year, self.hour_range.end.year + 1)
        return texas_holidays(years)


@dataclass(frozen=True)
class InjectionLog:
    """ Corruption applied to the emitted files. """
    dropped_hours: Tuple[pd.Timestamp, ...]
    block_gaps: Tuple[Tuple[pd.Timestamp, pd.Timestamp], ...]
    sentinels: Tuple[Tuple[pd.Timestamp, str], ...]

    def missing_hours(self) -> pd.DatetimeIndex:
        hours = list(self.dropped_hours)
        for start, end in self.block_gaps:
            hours.extend(pd.date_range(start, end, freq=pd.Timedelta(hours=1)))
        return pd.DatetimeIndex(sorted(set(hours)), name='timestamp')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dropped_hours': [format_timestamp(t) for t in self.dropped_hours],
            'block_gaps': [[format_timestamp(s), format_timestamp(e)] for s, e in self.block_gaps],
            'sentinels': [[format_timestamp(t), f] for t, f in self.sentinels],
        }


class SyntheticData(NamedTuple):
    consumption: str
    weather: str
    holidays: str
    ground_truth: CleanHourlySeries
    injection_log: InjectionLog

    def write(self, directory) -> Dict[str, str]:
        """ Writes every artifact into `directory` and returns their paths. """
        os.makedirs(directory, exist_ok=True)
        paths = {key: os.path.join(directory, name) for key, name in FILE_NAMES.items()}
        contents = {
            'consumption': self.consumption,
            'weather': self.weather,
            'holidays': self.holidays,
            'ground_truth': self.ground_truth.to_csv(),
            'injection_log': json.dumps(self.injection_log.to_dict(), indent=2, sort_keys=True) + '\n',
        }
        for key, text in contents.items():
            with open(paths[key], 'w', newline='') as f:
                f.write(text)
        return paths


def _nanoseconds(index: pd.DatetimeIndex) -> np.ndarray:
    return index.to_numpy(dtype='datetime64[ns]').astype(np.int64)


def _daily_anomaly(rng: np.random.Generator, index: pd.DatetimeIndex, sd: float) -> np.ndarray:
    """ Per-day anomaly drawn at noon and interpolated linearly between days. """
    days = index.normalize().unique()
    anchors = rng.normal(0.0, sd, size=len(days)) if sd > 0 else np.zeros(len(days))
    noon = _nanoseconds(days + pd.Timedelta(hours=12))
    return np.interp(_nanoseconds(index), noon, anchors)


def ground_truth(config: SynthConfig) -> CleanHourlySeries:
    """ The clean hourly series defined by `config`, before any corruption. """
    index = config.hour_range.index()
    rng = np.random.default_rng(config.seed)
    hour = index.hour.to_numpy()
    doy = index.dayofyear.to_numpy()

    diurnal_temp = np.cos(2 * np.pi * (hour - 15) / 24)
    temp = (TEMP_MEAN_F + TEMP_SEASONAL_F * np.cos(2 * np.pi * (doy - 200) / 365.25)
            + TEMP_DIURNAL_F * diurnal_temp
            + _daily_anomaly(rng, index, config.weather_variability))
    humidity = (HUMIDITY_MEAN - HUMIDITY_DIURNAL * diurnal_temp
                + _daily_anomaly(rng, index, config.weather_variability))
    if config.noise_sd > 0:
        weather_sd = WEATHER_NOISE_FACTOR * config.noise_sd
        temp = temp + rng.normal(0.0, weather_sd, size=len(index))
        humidity = humidity + rng.normal(0.0, weather_sd, size=len(index))
    humidity = np.clip(humidity, 0.0, 100.0)

    calendar = config.calendar
    is_weekend = (index.dayofweek >= 5).astype(float)
    is_holiday = np.fromiter((d in calendar for d in index.date), dtype=float, count=len(index))
    # load peaks in the early evening, and in winter
    diurnal = np.cos(2 * np.pi * (hour - 18) / 24)
    seasonal = np.cos(2 * np.pi * (doy - 15) / 365.25)

    kwh = (config.base_kwh + config.temp_coeff * temp + config.weekend_coeff * is_weekend
           + config.holiday_coeff * is_holiday + config.daily_amplitude * diurnal
           + config.seasonal_amplitude * seasonal)
    if config.noise_sd > 0:
        kwh = kwh + rng.normal(0.0, config.noise_sd, size=len(index))
    kwh = np.maximum(kwh, 0.0)

    frame = pd.DataFrame({'kwh': kwh, 'temp_f': temp, 'humidity_pct': humidity}, index=index)
    return CleanHourlySeries(frame)


def _block_starts(rng: np.random.Generator, n: int, count: int, length: int) -> List[int]:
    """ One block per equal segment of the range, kept clear of the ends. """
    if count == 0:
        return []
    usable = n - 2 * BLOCK_MARGIN_HOURS - length
    segment = usable // count
    if segment < length + BLOCK_MARGIN_HOURS:
        raise ValueError(f'{count} block gaps of {length} hours do not fit in {n} hours')
    # consecutive blocks stay at least BLOCK_MARGIN_HOURS apart
    return [BLOCK_MARGIN_HOURS + i * segment + int(rng.integers(0, segment - length - BLOCK_MARGIN_HOURS + 1))
            for i in range(count)]


def _emit(frame: pd.DataFrame, columns: Tuple[str, ...]) -> str:
    out = frame[list(columns)].copy()
    out.index = out.index.strftime(TIMESTAMP_FORMAT)
    return out.to_csv(index_label='timestamp', lineterminator='\n')


def generate(config: SynthConfig) -> SyntheticData:
    """ Generates the consumption, weather and holiday files for `config`
    together with the ground truth and a log of the injected corruption.
    """
    truth = ground_truth(config)
    index = truth.frame.index
    n = len(index)
    # separate stream: the ground truth never depends on the corruption settings
    rng = np.random.default_rng([config.seed, 1])

    dropped = rng.random(n) < config.gap_rate
    blocked = np.zeros(n, dtype=bool)
    block_gaps = []
    for start in _block_starts(rng, n, config.block_gap_count, config.block_gap_hours):
        stop = start + config.block_gap_hours
        blocked[start:stop] = True
        block_gaps.append((index[start], index[stop - 1]))
    dropped &= ~blocked

    emitted = truth.frame.copy()
    hit = (rng.random(n) < config.sentinel_rate) & ~dropped & ~blocked
    which = rng.integers(0, len(FIELDS), size=n)
    sentinels = []
    for i in np.flatnonzero(hit):
        emitted.iloc[i, which[i]] = SENTINEL
        sentinels.append((index[i], FIELDS[which[i]]))

    emitted = emitted[~(dropped | blocked)]
    log = InjectionLog(
        dropped_hours=tuple(index[dropped]),
        block_gaps=tuple(block_gaps),
        sentinels=tuple(sentinels),
    )
    _logger.info('generated %d hours: %d dropped, %d in %d blocks, %d sentinels',
                 n, int(dropped.sum()), int(blocked.sum()), len(block_gaps), len(sentinels))

    calendar = config.calendar
    return SyntheticData(
        consumption=_emit(emitted, ('kwh',)),
        weather=_emit(emitted, ('temp_f', 'humidity_pct')),
        holidays=format_holidays(calendar, header='synthetic holiday calendar'),
        ground_truth=truth,
        injection_log=log,
    )
