""" Repair of erroneous and missing hourly data.

Isolated problems (a sentinel value, or a single missing hour) are replaced by
the mean of the valid values two hours either side. Runs of missing hours are
filled hour by hour from the same hour of day on the two days before and the
two days after. Both rules read only the values present before the pass, so
the result does not depend on processing order, and at the edges of the range
the neighbourhood shrinks to whatever is available.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from load_forecasting.data.calendar import HOUR, HourRange
from load_forecasting.data.ingest import (FIELDS, ContinuityReport, FileLike, format_timestamp,
                                          invalid_mask, parse_hourly_files)

_logger = logging.getLogger(__name__)

#: Offsets, in hours, of the neighbours averaged for an isolated repair.
POINT_OFFSETS = (-2, -1, 1, 2)
#: Offsets, in hours, of the same-hour values averaged for a block repair.
BLOCK_OFFSETS = (-48, -24, 24, 48)


class UnrepairablePointError(ValueError):
    """ Indicates an isolated bad value with no valid neighbour. """


class UnrepairableBlockError(ValueError):
    """ Indicates a gap hour with no valid same-hour value on the surrounding days. """


class ResidualGapError(ValueError):
    """ Indicates holes left in a series that should be complete. """


class EmptySeriesError(ValueError):
    """ Indicates a clean series with no hours, which has no start. """


@dataclass(frozen=True, eq=False)
class CleanHourlySeries:
    """ Contiguous, repaired hourly records of consumption and weather.

    `frame` is indexed by consecutive hourly timestamps with the columns
    ``kwh``, ``temp_f`` and ``humidity_pct``.
    """
    frame: pd.DataFrame

    def __post_init__(self):
        frame = self.frame[list(FIELDS)].astype(float)
        if len(frame) and not (np.diff(frame.index.to_numpy()) == HOUR.to_timedelta64()).all():
            raise ValueError('hours of a clean series must be strictly consecutive')
        if invalid_mask(frame).to_numpy().any():
            raise ValueError('a clean series cannot hold absent, sentinel or out-of-range values')
        frame.index = pd.DatetimeIndex(frame.index, name='timestamp')
        object.__setattr__(self, 'frame', frame)

    @property
    def start(self) -> pd.Timestamp:
        if len(self.frame) == 0:
            raise EmptySeriesError('the series holds no hours')
        return self.frame.index[0]

    @property
    def hour_range(self) -> HourRange:
        return HourRange(self.start, self.start + len(self) * HOUR)

    @property
    def values(self) -> np.ndarray:
        """ `(kwh, temp_f, humidity_pct)` triples, one per hour. """
        return self.frame.to_numpy()

    def __len__(self):
        return len(self.frame)

    def to_csv(self, path=None):
        out = self.frame.copy()
        out.index = out.index.strftime('%Y-%m-%dT%H:%M')
        return out.to_csv(path, index_label='timestamp')


def _neighbour_means(valid: pd.Series, positions: np.ndarray,
                     offsets: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """ Mean and count of the valid values at `positions + offset`. """
    values = valid.to_numpy()
    n = len(values)
    stacked = np.full((len(positions), len(offsets)), np.nan)
    for j, k in enumerate(offsets):
        target = positions + k
        inside = (target >= 0) & (target < n)
        stacked[inside, j] = values[target[inside]]
    count = (~np.isnan(stacked)).sum(axis=1)
    total = np.nansum(stacked, axis=1)
    with np.errstate(invalid='ignore', divide='ignore'):
        return total / count, count


def repair_local(records: pd.DataFrame, report: ContinuityReport) -> pd.DataFrame:
    """ Replaces every flagged value and every isolated missing hour by the
    mean of the valid values among the hours t-2, t-1, t+1 and t+2.

    Values at hours not listed in `report` are returned bitwise unchanged;
    hours of block gaps stay absent.

    Raises:
        UnrepairablePointError: if all four neighbours are invalid or absent.
    """
    index = report.hour_range.index()
    full = records.reindex(index)
    valid = full.where(~invalid_mask(full))
    result = full.copy()

    point_gaps = list(report.point_gaps)
    for field in FIELDS:
        targets = sorted(set(point_gaps) | {t for t, f in report.sentinel_hits if f == field})
        if not targets:
            continue
        positions = index.get_indexer(targets)
        means, count = _neighbour_means(valid[field], positions, POINT_OFFSETS)
        if (count == 0).any():
            t = targets[int(np.flatnonzero(count == 0)[0])]
            raise UnrepairablePointError(f'no valid {field} within two hours of {format_timestamp(t)}')
        column = result[field].to_numpy(copy=True)
        column[positions] = means
        result[field] = column

    _logger.debug('repaired %d point gaps and %d invalid values',
                  len(point_gaps), len(report.sentinel_hits))
    keep = index.isin(records.index) | index.isin(point_gaps)
    return result[keep]


def repair_block(records: pd.DataFrame, report: ContinuityReport) -> pd.DataFrame:
    """ Fills every hour of a multi-hour gap with the mean of the valid values
    at the same hour of day on days d-2, d-1, d+1 and d+2.

    Raises:
        UnrepairableBlockError: naming the gap whose hour has no valid
            same-hour value.
    """
    index = report.hour_range.index()
    full = records.reindex(index)
    valid = full.where(~invalid_mask(full))
    result = full.copy()

    columns = {field: result[field].to_numpy(copy=True) for field in FIELDS}
    filled = np.zeros(len(index), dtype=bool)
    for start, end in report.block_gaps:
        positions = np.arange(index.get_loc(start), index.get_loc(end) + 1)
        for field in FIELDS:
            means, count = _neighbour_means(valid[field], positions, BLOCK_OFFSETS)
            if (count == 0).any():
                t = index[positions[int(np.flatnonzero(count == 0)[0])]]
                raise UnrepairableBlockError(
                    f'cannot fill gap {format_timestamp(start)} .. {format_timestamp(end)}: '
                    f'no valid {field} at hour {t.hour:02d} on the two days before or after '
                    f'{t.date().isoformat()}')
            columns[field][positions] = means
        filled[positions] = True
    for field in FIELDS:
        result[field] = columns[field]

    _logger.debug('filled %d block gaps (%d hours)', len(report.block_gaps), int(filled.sum()))
    keep = index.isin(records.index) | filled
    return result[keep]


def finalize_series(records: pd.DataFrame, hour_range: HourRange) -> CleanHourlySeries:
    """ Returns the contiguous series over `hour_range`.

    Raises:
        ResidualGapError: listing the hours still absent or invalid.
    """
    full = records.reindex(hour_range.index())
    holes = full.index[invalid_mask(full).to_numpy().any(axis=1)]
    if len(holes):
        shown = ', '.join(format_timestamp(t) for t in holes[:10])
        more = f' and {len(holes) - 10} more' if len(holes) > 10 else ''
        raise ResidualGapError(f'{len(holes)} hour(s) still missing or invalid: {shown}{more}')
    return CleanHourlySeries(full)


def load_clean_series(consumption_file: FileLike, weather_file: FileLike,
                      hour_range: HourRange) -> Tuple[CleanHourlySeries, ContinuityReport]:
    """ Parses both sources, repairs isolated problems, then multi-hour gaps,
    and returns the finished series together with the continuity report of the
    raw data.
    """
    records, report = parse_hourly_files(consumption_file, weather_file, hour_range)
    records = repair_local(records, report)
    records = repair_block(records, report)
    return finalize_series(records, hour_range), report
