""" Weekend and holiday determination, and hour-range arithmetic.

Timestamps are naive local time with uniform 24-hour days: no daylight
saving adjustment is applied anywhere.
"""

import datetime
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Union

import pandas as pd

_logger = logging.getLogger(__name__)

HOUR = pd.Timedelta(hours=1)
DAY = pd.Timedelta(days=1)

DateLike = Union[datetime.date, pd.Timestamp, str]


class InvertedRangeError(ValueError):
    """ Indicates a range whose start lies after its end. """


class MalformedDateError(ValueError):
    """ Indicates an unparseable line in a holiday file. """


def _to_date(value: DateLike) -> datetime.date:
    if isinstance(value, pd.Timestamp):
        return value.date()
    if isinstance(value, datetime.datetime):
        return value.date()
    if isinstance(value, datetime.date):
        return value
    return datetime.date.fromisoformat(str(value))


@dataclass(frozen=True)
class HourRange:
    """ Half-open span `[start, end)` of whole hours. """
    start: pd.Timestamp
    end: pd.Timestamp

    def __post_init__(self):
        start, end = pd.Timestamp(self.start), pd.Timestamp(self.end)
        for name, t in (('start', start), ('end', end)):
            if t != t.floor(HOUR):
                raise ValueError(f'range {name} {t} is not a whole hour')
        if start > end:
            raise InvertedRangeError(f'range start {start} is after end {end}')
        object.__setattr__(self, 'start', start)
        object.__setattr__(self, 'end', end)

    def __len__(self):
        return expected_hour_count(self)

    def index(self) -> pd.DatetimeIndex:
        """ Every hour in the range, in order. """
        return pd.date_range(self.start, periods=len(self), freq=HOUR, name='timestamp')

    def contains(self, timestamp: pd.Timestamp) -> bool:
        return self.start <= timestamp < self.end

    def __str__(self):
        return f'[{self.start.isoformat()}, {self.end.isoformat()})'


def expected_hour_count(hour_range: HourRange) -> int:
    """ Number of hours in `[start, end)`. """
    if hour_range.start > hour_range.end:
        raise InvertedRangeError(f'range start {hour_range.start} is after end {hour_range.end}')
    return int((hour_range.end - hour_range.start) // HOUR)


def is_weekend(date: DateLike) -> bool:
    """ True iff the date is a Saturday or a Sunday. """
    return _to_date(date).weekday() >= 5


@dataclass(frozen=True)
class HolidayCalendar:
    dates: FrozenSet[datetime.date] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'dates', frozenset(_to_date(d) for d in self.dates))

    def __contains__(self, date: DateLike) -> bool:
        return _to_date(date) in self.dates

    def __len__(self):
        return len(self.dates)

    def is_holiday(self, date: DateLike) -> bool:
        return date in self

    def check_range(self, hour_range: HourRange) -> FrozenSet[datetime.date]:
        """ Logs a warning for holidays falling outside the data range and
        returns them.
        """
        first, last = hour_range.start.date(), (hour_range.end - HOUR).date()
        outside = frozenset(d for d in self.dates if not first <= d <= last)
        if outside:
            _logger.warning('%d holiday(s) outside the data range %s, e.g. %s',
                            len(outside), hour_range, min(outside).isoformat())
        return outside


def load_holidays(path, hour_range: HourRange = None) -> HolidayCalendar:
    """ Reads one ISO date per line; `#` starts a comment, blank lines are
    skipped and duplicates collapse.

    Raises:
        MalformedDateError: with the 1-based line number of a bad entry.
    """
    dates = set()
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            text = line.split('#', 1)[0].strip()
            if not text:
                continue
            try:
                dates.add(datetime.date.fromisoformat(text))
            except ValueError:
                raise MalformedDateError(f'{path}:{lineno}: malformed date {text!r}') from None
    calendar = HolidayCalendar(frozenset(dates))
    if hour_range is not None:
        calendar.check_range(hour_range)
    return calendar


def _nth_weekday(year: int, month: int, weekday: int, n: int) -> datetime.date:
    """ n-th (1-based, or -1 for last) given weekday of a month. """
    if n > 0:
        first = datetime.date(year, month, 1)
        return first + datetime.timedelta(days=(weekday - first.weekday()) % 7 + 7 * (n - 1))
    last = (pd.Timestamp(year=year, month=month, day=1) + pd.offsets.MonthEnd(1)).date()
    return last - datetime.timedelta(days=(last.weekday() - weekday) % 7)


def texas_holidays(years: Iterable[int]) -> HolidayCalendar:
    """ Texas state holidays on their calendar dates (no weekend observance
    shifting; optional and floating holidays omitted).
    """
    mon, thu = 0, 3
    dates = set()
    for y in years:
        thanksgiving = _nth_weekday(y, 11, thu, 4)
        dates.update({
            datetime.date(y, 1, 1),                 # New Year's Day
            _nth_weekday(y, 1, mon, 3),             # Martin Luther King Jr. Day
            datetime.date(y, 1, 19),                # Confederate Heroes Day
            _nth_weekday(y, 2, mon, 3),             # Presidents' Day
            datetime.date(y, 3, 2),                 # Texas Independence Day
            datetime.date(y, 4, 21),                # San Jacinto Day
            _nth_weekday(y, 5, mon, -1),            # Memorial Day
            datetime.date(y, 6, 19),                # Emancipation Day
            datetime.date(y, 7, 4),                 # Independence Day
            datetime.date(y, 8, 27),                # Lyndon Baines Johnson Day
            _nth_weekday(y, 9, mon, 1),             # Labor Day
            datetime.date(y, 11, 11),               # Veterans Day
            thanksgiving,
            thanksgiving + datetime.timedelta(days=1),
            datetime.date(y, 12, 24),
            datetime.date(y, 12, 25),
            datetime.date(y, 12, 26),
        })
    return HolidayCalendar(frozenset(dates))


def format_holidays(calendar: HolidayCalendar, header: str = None) -> str:
    """ Renders a calendar in the holiday file format. """
    lines = [f'# {header}'] if header else []
    lines += [d.isoformat() for d in sorted(calendar.dates)]
    return '\n'.join(lines) + '\n'
