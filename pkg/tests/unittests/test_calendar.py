import datetime
import os
import tempfile
import unittest
from unittest import TestCase

import numpy as np
import pandas as pd

from load_forecasting.data.calendar import (HolidayCalendar, HourRange, InvertedRangeError,
                                            MalformedDateError, expected_hour_count, format_holidays,
                                            is_weekend, load_holidays, texas_holidays)
from tests.unittests import fixture_path


class TestHourRange(TestCase):

    def test_two_years(self):
        self.assertEqual(expected_hour_count(HourRange('2016-01-01', '2018-01-01')), 17544)

    def test_empty_range(self):
        hours = HourRange('2016-03-01T05:00', '2016-03-01T05:00')
        self.assertEqual(len(hours), 0)
        self.assertEqual(len(hours.index()), 0)

    def test_inverted(self):
        with self.assertRaises(InvertedRangeError):
            HourRange('2016-01-02', '2016-01-01')

    def test_partial_hour(self):
        with self.assertRaises(ValueError):
            HourRange('2016-01-01T00:30', '2016-01-02')

    def test_index(self):
        index = HourRange('2016-01-01T22:00', '2016-01-02T01:00').index()
        self.assertEqual(list(index.hour), [22, 23, 0])
        self.assertTrue(HourRange('2016-01-01', '2016-01-02').contains(pd.Timestamp('2016-01-01T23:00')))
        self.assertFalse(HourRange('2016-01-01', '2016-01-02').contains(pd.Timestamp('2016-01-02')))

    def test_additive_over_adjacent_ranges(self):
        rng = np.random.default_rng(5)
        base = pd.Timestamp('2016-01-01')
        for _ in range(50):
            a, b, c = np.sort(rng.integers(0, 17544, size=3))
            first, middle, last = (base + pd.Timedelta(hours=int(h)) for h in (a, b, c))
            self.assertEqual(expected_hour_count(HourRange(first, middle)) + expected_hour_count(HourRange(middle, last)),
                             expected_hour_count(HourRange(first, last)))
            self.assertEqual(expected_hour_count(HourRange(first, last)), c - a)


class TestWeekend(TestCase):

    def test_seven_day_period(self):
        days = pd.date_range('2016-01-01', '2017-12-31', freq='D')
        for day in days:
            self.assertEqual(is_weekend(day), is_weekend(day + pd.Timedelta(days=7)))

    def test_two_weekend_days_per_seven(self):
        flags = [is_weekend(d) for d in pd.date_range('2016-01-01', '2017-12-31', freq='D')]
        for i in range(len(flags) - 6):
            self.assertEqual(sum(flags[i:i + 7]), 2)

    def test_january_2016(self):
        days = pd.date_range('2016-01-01', '2016-01-31', freq='D')
        self.assertEqual(sum(is_weekend(d) for d in days), 10)

    def test_accepts_strings_and_dates(self):
        self.assertTrue(is_weekend('2016-01-02'))
        self.assertFalse(is_weekend(datetime.date(2016, 1, 4)))
        self.assertTrue(is_weekend(pd.Timestamp('2016-01-03T15:00')))


class TestHolidays(TestCase):

    def test_fixture_matches_builtin_list(self):
        loaded = load_holidays(fixture_path('texas_holidays_2016_2017.txt'))
        self.assertEqual(loaded, texas_holidays([2016, 2017]))

    def test_known_dates(self):
        calendar = texas_holidays([2016, 2017])
        self.assertIn('2016-11-24', calendar)  # Thanksgiving
        self.assertIn('2017-05-29', calendar)  # Memorial Day
        self.assertIn(datetime.date(2017, 1, 16), calendar)  # MLK Day
        self.assertNotIn('2016-07-05', calendar)

    def test_file_format(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'holidays.txt')
            with open(path, 'w') as f:
                f.write('# comment\n\n2016-07-04\n2016-07-04  # again\n2016-12-25\n')
            calendar = load_holidays(path)
        self.assertEqual(len(calendar), 2)
        self.assertTrue(calendar.is_holiday('2016-12-25'))

    def test_malformed_line(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'holidays.txt')
            with open(path, 'w') as f:
                f.write('2016-07-04\n2016-13-01\n')
            with self.assertRaises(MalformedDateError) as ctx:
                load_holidays(path)
        self.assertIn(':2:', str(ctx.exception))

    def test_outside_range_warns(self):
        calendar = HolidayCalendar(frozenset({datetime.date(2015, 12, 25), datetime.date(2016, 1, 1)}))
        with self.assertLogs('load_forecasting.data.calendar', level='WARNING'):
            outside = calendar.check_range(HourRange('2016-01-01', '2017-01-01'))
        self.assertEqual(outside, frozenset({datetime.date(2015, 12, 25)}))

    def test_format_round_trip(self):
        calendar = texas_holidays([2017])
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'holidays.txt')
            with open(path, 'w') as f:
                f.write(format_holidays(calendar, header='2017'))
            self.assertEqual(load_holidays(path), calendar)


if __name__ == '__main__':
    unittest.main()
