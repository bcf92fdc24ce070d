""" Parsing of raw hourly consumption and weather files.

Consumption file: CSV with header ``timestamp,kwh``. Weather file: CSV with
header ``timestamp,temp_f,humidity_pct``. Timestamps are ISO-8601 local time
truncated to the hour. The two sources are merged on exact timestamps; an hour
missing from either source is a gap for every field.

Each parsed record is a row of a DataFrame indexed by ``timestamp`` with
columns ``kwh``, ``temp_f`` and ``humidity_pct`` (NaN marks an empty cell).
"""

import io
import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, Tuple, Union

import numpy as np
import pandas as pd

from load_forecasting.core.constants import SENTINEL, SENTINEL_TOL
from load_forecasting.data.calendar import HOUR, HourRange, expected_hour_count

_logger = logging.getLogger(__name__)

FIELDS = ('kwh', 'temp_f', 'humidity_pct')
CONSUMPTION_COLUMNS = ('timestamp', 'kwh')
WEATHER_COLUMNS = ('timestamp', 'temp_f', 'humidity_pct')
TIMESTAMP_FORMAT = '%Y-%m-%dT%H:%M'

FileLike = Union[str, os.PathLike, io.IOBase]


class MalformedRowError(ValueError):
    """ Indicates a row that cannot be parsed; the message carries the line number. """


class DuplicateTimestampError(ValueError):
    """ Indicates a timestamp that occurs more than once in one source file. """


def format_timestamp(t: pd.Timestamp) -> str:
    return pd.Timestamp(t).strftime(TIMESTAMP_FORMAT)


@dataclass(frozen=True)
class ContinuityReport:
    """ Completeness of the merged records over the requested range.

    Attributes:
        expected_count (int): Hours in the requested range.
        actual_count (int): Hours with a merged record.
        point_gaps: Isolated missing hours.
        block_gaps: Runs of two or more missing hours, as inclusive
            `(first_missing, last_missing)` pairs.
        sentinel_hits: `(timestamp, field)` for every invalid value inside a
            present record.
    """
    hour_range: HourRange
    expected_count: int
    actual_count: int
    point_gaps: Tuple[pd.Timestamp, ...]
    block_gaps: Tuple[Tuple[pd.Timestamp, pd.Timestamp], ...]
    sentinel_hits: Tuple[Tuple[pd.Timestamp, str], ...]

    def missing_hours(self) -> pd.DatetimeIndex:
        hours = list(self.point_gaps)
        for start, end in self.block_gaps:
            hours.extend(pd.date_range(start, end, freq=HOUR))
        return pd.DatetimeIndex(sorted(hours), name='timestamp')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'range': {'start': format_timestamp(self.hour_range.start),
                      'end': format_timestamp(self.hour_range.end)},
            'expected_count': self.expected_count,
            'actual_count': self.actual_count,
            'point_gaps': [format_timestamp(t) for t in self.point_gaps],
            'block_gaps': [[format_timestamp(s), format_timestamp(e)] for s, e in self.block_gaps],
            'sentinel_hits': [[format_timestamp(t), field] for t, field in self.sentinel_hits],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'


def invalid_mask(records: pd.DataFrame) -> pd.DataFrame:
    """ Marks sentinel, out-of-range and empty values.

    The sentinel is -999.99 within an absolute tolerance of 1e-6; negative
    consumption and humidity outside [0, 100] are treated the same way.
    """
    values = records[list(FIELDS)]
    mask = values.isna() | pd.DataFrame(np.isclose(values.to_numpy(dtype=float), SENTINEL,
                                                   rtol=0.0, atol=SENTINEL_TOL),
                                        index=values.index, columns=values.columns)
    mask['kwh'] |= values['kwh'] < 0
    mask['humidity_pct'] |= (values['humidity_pct'] < 0) | (values['humidity_pct'] > 100)
    return mask


def _read_source(source: FileLike, columns: Tuple[str, ...], label: str) -> pd.DataFrame:
    try:
        raw = pd.read_csv(source, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raw = pd.DataFrame(columns=list(columns), dtype=str)
    except pd.errors.ParserError as err:
        raise MalformedRowError(f'{label}: {err}') from None

    if tuple(c.strip() for c in raw.columns) != columns:
        raise MalformedRowError(f'{label}:1: expected header {",".join(columns)}, '
                                f'got {",".join(map(str, raw.columns))}')
    raw.columns = list(columns)
    for col in columns:
        raw[col] = raw[col].fillna('').astype(str).str.strip()
    # line 1 is the header
    lines = np.arange(len(raw)) + 2

    ts = pd.to_datetime(raw['timestamp'], format='ISO8601', errors='coerce')
    bad = ts.isna() | (ts != ts.dt.floor(HOUR))
    if bad.any():
        i = int(np.flatnonzero(bad.to_numpy())[0])
        raise MalformedRowError(f'{label}:{lines[i]}: bad timestamp {raw["timestamp"].iloc[i]!r}')

    frame = pd.DataFrame(index=pd.DatetimeIndex(ts, name='timestamp'))
    for col in columns[1:]:
        values = pd.to_numeric(raw[col].replace('', np.nan), errors='coerce')
        bad = values.isna() & (raw[col] != '')
        if bad.any():
            i = int(np.flatnonzero(bad.to_numpy())[0])
            raise MalformedRowError(f'{label}:{lines[i]}: bad {col} value {raw[col].iloc[i]!r}')
        frame[col] = values.to_numpy(dtype=float)

    dup = frame.index.duplicated(keep='first')
    if dup.any():
        i = int(np.flatnonzero(dup)[0])
        raise DuplicateTimestampError(
            f'{label}:{lines[i]}: duplicate timestamp {format_timestamp(frame.index[i])}')
    return frame


def continuity_report(records: pd.DataFrame, hour_range: HourRange) -> ContinuityReport:
    """ Enumerates absent hours (split into point and block gaps) and invalid
    values of `records` over `hour_range`.
    """
    full = hour_range.index()
    missing = np.flatnonzero(~full.isin(records.index))
    point_gaps, block_gaps = [], []
    if missing.size:
        runs = np.split(missing, np.flatnonzero(np.diff(missing) != 1) + 1)
        for run in runs:
            if run.size == 1:
                point_gaps.append(full[run[0]])
            else:
                block_gaps.append((full[run[0]], full[run[-1]]))

    mask = invalid_mask(records)
    hits = [(t, field) for t, row in zip(mask.index, mask.to_numpy())
            for field, flag in zip(FIELDS, row) if flag]

    return ContinuityReport(
        hour_range=hour_range,
        expected_count=expected_hour_count(hour_range),
        actual_count=len(records),
        point_gaps=tuple(point_gaps),
        block_gaps=tuple(block_gaps),
        sentinel_hits=tuple(hits),
    )


def parse_hourly_files(consumption_file: FileLike, weather_file: FileLike,
                       hour_range: HourRange) -> Tuple[pd.DataFrame, ContinuityReport]:
    """ Reads and merges both sources, keeping records inside `hour_range`.

    Raises:
        MalformedRowError: for an unparseable row (with its line number).
        DuplicateTimestampError: for a timestamp repeated within a file.
    """
    consumption = _read_source(consumption_file, CONSUMPTION_COLUMNS, _label(consumption_file, 'consumption'))
    weather = _read_source(weather_file, WEATHER_COLUMNS, _label(weather_file, 'weather'))

    records = consumption.join(weather, how='inner').sort_index()
    records = records[(records.index >= hour_range.start) & (records.index < hour_range.end)]
    records = records[list(FIELDS)]

    report = continuity_report(records, hour_range)
    _logger.info('parsed %d of %d expected hours: %d point gaps, %d block gaps, %d invalid values',
                 report.actual_count, report.expected_count, len(report.point_gaps),
                 len(report.block_gaps), len(report.sentinel_hits))
    return records, report


def _label(source: FileLike, default: str) -> str:
    return str(source) if isinstance(source, (str, bytes)) or hasattr(source, '__fspath__') else default
