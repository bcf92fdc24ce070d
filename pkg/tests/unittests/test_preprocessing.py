import os
import tempfile
import unittest
from unittest import TestCase

import numpy as np
import pandas as pd

from load_forecasting.core.constants import SENTINEL
from load_forecasting.data.calendar import HourRange
from load_forecasting.data.ingest import FIELDS, continuity_report
from load_forecasting.data.preprocessing import (CleanHourlySeries, EmptySeriesError, ResidualGapError,
                                                 UnrepairableBlockError, UnrepairablePointError, finalize_series,
                                                 load_clean_series, repair_block, repair_local)
from load_forecasting.data.synthetic import SynthConfig, generate
from tests.unittests import day_range, synthetic_series

BLOCK_HOURS = 6


def repair(records, hour_range):
    report = continuity_report(records, hour_range)
    repaired = repair_block(repair_local(records, report), report)
    return finalize_series(repaired, hour_range), report


class TestRepairAgainstOracle(TestCase):
    """ 200 missing hours, 50 sentinels and 5 six-hour blocks on a two-year
    series, compared with means computed directly from the clean values.
    """

    @classmethod
    def setUpClass(cls):
        cls.truth = synthetic_series(days=731)
        cls.hour_range = cls.truth.hour_range
        values = cls.truth.frame
        rng = np.random.default_rng(7)

        # isolated problems in the first year, 20 hours apart; blocks in the second
        cls.holes = np.sort(rng.choice(np.arange(10, 8000, 20), size=200, replace=False))
        cls.sentinels = np.sort(rng.choice(np.arange(20, 8000, 20), size=50, replace=False))
        cls.blocks = [9000 + 1500 * k for k in range(5)]

        records = values.copy()
        for i, pos in enumerate(cls.sentinels):
            records.iloc[pos, i % len(FIELDS)] = SENTINEL
        blocked = np.concatenate([np.arange(b, b + BLOCK_HOURS) for b in cls.blocks])
        cls.removed = np.concatenate([cls.holes, blocked])
        records = records.drop(index=values.index[cls.removed])

        cls.clean, cls.report = repair(records, cls.hour_range)

    def test_report_classification(self):
        self.assertEqual(len(self.report.point_gaps), 200)
        self.assertEqual(len(self.report.block_gaps), 5)
        self.assertEqual(len(self.report.sentinel_hits), 50)

    def test_complete(self):
        self.assertEqual(len(self.clean), 17544)
        self.assertEqual(self.clean.hour_range, self.hour_range)

    def test_point_repairs(self):
        truth = self.truth.values
        for pos in self.holes:
            expected = truth[[pos - 2, pos - 1, pos + 1, pos + 2]].mean(axis=0)
            np.testing.assert_allclose(self.clean.values[pos], expected, rtol=0, atol=1e-12)

    def test_sentinel_repairs_touch_one_field(self):
        truth = self.truth.values
        for i, pos in enumerate(self.sentinels):
            field = i % len(FIELDS)
            expected = truth[[pos - 2, pos - 1, pos + 1, pos + 2], field].mean()
            self.assertAlmostEqual(self.clean.values[pos, field], expected, delta=1e-12)
            others = [j for j in range(len(FIELDS)) if j != field]
            np.testing.assert_array_equal(self.clean.values[pos, others], truth[pos, others])

    def test_block_repairs(self):
        truth = self.truth.values
        for start in self.blocks:
            for pos in range(start, start + BLOCK_HOURS):
                expected = truth[[pos - 48, pos - 24, pos + 24, pos + 48]].mean(axis=0)
                np.testing.assert_allclose(self.clean.values[pos], expected, rtol=0, atol=1e-12)

    def test_untouched_hours_bitwise_equal(self):
        touched = np.zeros(len(self.truth), dtype=bool)
        touched[self.removed] = True
        touched[self.sentinels] = True
        np.testing.assert_array_equal(self.clean.values[~touched], self.truth.values[~touched])


class TestRepairEdges(TestCase):

    def setUp(self):
        self.truth = synthetic_series(days=10)
        self.hour_range = self.truth.hour_range

    def test_point_at_range_start_uses_available_neighbours(self):
        records = self.truth.frame.iloc[1:]
        clean, _ = repair(records, self.hour_range)
        expected = self.truth.values[[1, 2]].mean(axis=0)
        np.testing.assert_allclose(clean.values[0], expected, rtol=0, atol=1e-12)

    def test_repair_reads_pre_repair_values(self):
        # 10 and 13 are gaps: neither uses the other's repaired value
        records = self.truth.frame.drop(index=self.truth.frame.index[[10, 13]])
        clean, _ = repair(records, self.hour_range)
        truth = self.truth.values
        np.testing.assert_allclose(clean.values[10], truth[[8, 9, 11, 12]].mean(axis=0), atol=1e-12)
        np.testing.assert_allclose(clean.values[13], truth[[11, 12, 14, 15]].mean(axis=0), atol=1e-12)

    def test_unrepairable_point(self):
        records = self.truth.frame.copy()
        records.iloc[[8, 9, 11, 12], 0] = SENTINEL
        records = records.drop(index=records.index[10])
        with self.assertRaises(UnrepairablePointError) as ctx:
            repair(records, self.hour_range)
        self.assertIn('kwh', str(ctx.exception))

    def test_unrepairable_block(self):
        one_day = HourRange(self.hour_range.start, self.hour_range.start + pd.Timedelta(days=1))
        frame = self.truth.frame.iloc[:24]
        records = frame.drop(index=frame.index[5:11])
        with self.assertRaises(UnrepairableBlockError) as ctx:
            repair(records, one_day)
        self.assertIn('05:00', str(ctx.exception))

    def test_repairs_leave_clean_series_unchanged(self):
        records = self.truth.frame
        report = continuity_report(records, self.hour_range)
        local = repair_local(records, report)
        block = repair_block(local, report)
        for repaired in (local, block):
            self.assertTrue(repaired.index.equals(records.index))
            np.testing.assert_array_equal(repaired.to_numpy(), records.to_numpy())

    def test_repaired_series_is_fixed_point(self):
        records = self.truth.frame.drop(index=self.truth.frame.index[[10, 40, 41, 42]])
        clean, _ = repair(records, self.hour_range)
        report = continuity_report(clean.frame, self.hour_range)
        again = repair_block(repair_local(clean.frame, report), report)
        np.testing.assert_array_equal(again.to_numpy(), clean.values)

    def test_finalize_rejects_holes(self):
        records = self.truth.frame.drop(index=self.truth.frame.index[3])
        with self.assertRaises(ResidualGapError):
            finalize_series(records, self.hour_range)

    def test_empty_range(self):
        start = self.hour_range.start
        clean = finalize_series(self.truth.frame, HourRange(start, start))
        self.assertEqual(len(clean), 0)
        with self.assertRaises(EmptySeriesError):
            clean.start
        with self.assertRaises(EmptySeriesError):
            clean.hour_range

    def test_clean_series_rejects_sentinels(self):
        frame = self.truth.frame.copy()
        frame.iloc[0, 1] = SENTINEL
        with self.assertRaises(ValueError):
            CleanHourlySeries(frame)


class TestLoadCleanSeries(TestCase):

    def test_generated_files(self):
        config = SynthConfig(hour_range=day_range('2016-01-01', 60), gap_rate=0.01, sentinel_rate=0.005,
                             block_gap_count=2, seed=11)
        data = generate(config)
        with tempfile.TemporaryDirectory() as tmp:
            paths = data.write(tmp)
            clean, report = load_clean_series(paths['consumption'], paths['weather'], config.hour_range)

        self.assertEqual(len(clean), 60 * 24)
        self.assertTrue(report.missing_hours().equals(data.injection_log.missing_hours()))
        self.assertEqual(set(report.sentinel_hits), set(data.injection_log.sentinels))

        truth = data.ground_truth.frame
        touched = truth.index.isin(report.missing_hours()) | truth.index.isin([t for t, _ in report.sentinel_hits])
        np.testing.assert_allclose(clean.frame.to_numpy()[~touched], truth.to_numpy()[~touched], rtol=1e-12)

    def test_clean_csv(self):
        truth = synthetic_series(days=2)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'clean.csv')
            truth.to_csv(path)
            frame = pd.read_csv(path)
        self.assertEqual(list(frame.columns), ['timestamp', 'kwh', 'temp_f', 'humidity_pct'])
        self.assertEqual(frame['timestamp'].iloc[1], '2016-01-01T01:00')


if __name__ == '__main__':
    unittest.main()
