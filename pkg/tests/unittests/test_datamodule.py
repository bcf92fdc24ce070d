import unittest
from unittest import TestCase

import numpy as np

from load_forecasting.data.datamodule import (EmptyFeatureSetError, FeatureSpec, InsufficientHistoryError, SplitSpec,
                                              TooFewRowsError, UnknownFactorError, build_design_matrix, split, split_indices)
from tests.unittests import synthetic_dataset


class TestFeatureSpec(TestCase):

    def test_widths(self):
        self.assertEqual(FeatureSpec('daily', 7, True).width, 15)
        self.assertEqual(FeatureSpec('daily', 1, False).width, 1)
        self.assertEqual(FeatureSpec('daily', 7, False).width, 7)
        self.assertEqual(FeatureSpec('hourly', 0, True).width, 7)
        self.assertEqual(FeatureSpec('monthly', 2, True).width, 10)

    def test_factor_mask(self):
        spec = FeatureSpec('daily', 3, True, frozenset({'is_holiday', 'temp_avg'}))
        self.assertEqual(spec.context_features, ('temp_avg', 'is_holiday'))
        self.assertEqual(spec.width, 5)

    def test_without(self):
        spec = FeatureSpec('weekly', 2).without('holiday_count')
        self.assertNotIn('holiday_count', spec.context_features)
        self.assertEqual(spec.width, 2 + 6)
        with self.assertRaises(UnknownFactorError):
            FeatureSpec('weekly', 2).without('is_weekend')

    def test_invalid(self):
        with self.assertRaises(UnknownFactorError):
            FeatureSpec('daily', 1, True, frozenset({'hour_of_day'}))
        with self.assertRaises(ValueError):
            FeatureSpec('daily', -1)
        with self.assertRaises(EmptyFeatureSetError):
            FeatureSpec('daily', 0, False)

    def test_dict_round_trip(self):
        spec = FeatureSpec('monthly', 4, True, frozenset({'holiday_count'}))
        self.assertEqual(FeatureSpec.from_dict(spec.to_dict()), spec)


class TestDesignMatrix(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.dataset = synthetic_dataset('daily', days=730)

    def test_shape_and_names(self):
        matrix = build_design_matrix(self.dataset, FeatureSpec('daily', 7, True))
        self.assertEqual(matrix.x.shape, (723, 15))
        self.assertEqual(matrix.feature_names[:2], ('kwh_total[t-7]', 'kwh_total[t-6]'))
        self.assertEqual(matrix.feature_names[6], 'kwh_total[t-1]')
        self.assertEqual(matrix.feature_names[7:], self.dataset.context_columns)

    def test_lag_indexing(self):
        target = self.dataset.target
        lag_count = 7
        matrix = build_design_matrix(self.dataset, FeatureSpec('daily', lag_count, True))
        rng = np.random.default_rng(2016)
        rows = rng.integers(0, len(matrix), size=1000)
        lags = rng.integers(1, lag_count + 1, size=1000)
        for i, k in zip(rows, lags):
            t = i + lag_count
            self.assertEqual(matrix.x[i, lag_count - k], target[t - k])
            self.assertEqual(matrix.y[i], target[t])
        for i in (0, 722):
            t = i + lag_count
            self.assertEqual(matrix.period_starts[i], self.dataset.period_starts[t])
            np.testing.assert_array_equal(matrix.x[i, lag_count:],
                                          self.dataset.frame.iloc[t, 1:].to_numpy(dtype=float))

    def test_context_only(self):
        matrix = build_design_matrix(self.dataset, FeatureSpec('daily', 0, True))
        self.assertEqual(matrix.x.shape, (730, 8))
        np.testing.assert_array_equal(matrix.y, self.dataset.target)

    def test_lags_only(self):
        matrix = build_design_matrix(self.dataset, FeatureSpec('daily', 1, False))
        np.testing.assert_array_equal(matrix.x[:, 0], self.dataset.target[:-1])

    def test_insufficient_history(self):
        monthly = synthetic_dataset('monthly', days=731)
        with self.assertRaises(InsufficientHistoryError):
            build_design_matrix(monthly, FeatureSpec('monthly', 24, True))
        self.assertEqual(len(build_design_matrix(monthly, FeatureSpec('monthly', 23, True))), 1)

    def test_scale_mismatch(self):
        with self.assertRaises(ValueError):
            build_design_matrix(self.dataset, FeatureSpec('weekly', 1))


class TestSplit(TestCase):

    def test_sizes(self):
        self.assertEqual(SplitSpec().sizes(100), (70, 15, 15))
        self.assertEqual(sum(SplitSpec().sizes(723)), 723)
        self.assertEqual(SplitSpec(0.5, 0.25, 0.25).sizes(10), (5, 2, 3))

    def test_partition(self):
        train, val, test = split_indices(100, SplitSpec(seed=3))
        everything = np.concatenate([train, val, test])
        self.assertEqual(sorted(everything.tolist()), list(range(100)))
        np.testing.assert_array_equal(test, np.arange(85, 100))
        self.assertTrue((np.diff(val) > 0).all())
        self.assertTrue(val.max() < 85)

    def test_test_rows_follow_all_others(self):
        for n in (10, 37, 100, 723):
            for seed in range(5):
                train, val, test = split_indices(n, SplitSpec(seed=seed))
                self.assertGreater(test.min(), np.concatenate([train, val]).max())

    def test_seeded(self):
        a = split_indices(200, SplitSpec(seed=1))
        b = split_indices(200, SplitSpec(seed=1))
        c = split_indices(200, SplitSpec(seed=2))
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)
        self.assertFalse(np.array_equal(a[1], c[1]))
        np.testing.assert_array_equal(a[2], c[2])

    def test_too_few_rows(self):
        with self.assertRaises(TooFewRowsError):
            SplitSpec().sizes(3)

    def test_invalid_fractions(self):
        with self.assertRaises(ValueError):
            SplitSpec(0.7, 0.2, 0.2)
        with self.assertRaises(ValueError):
            SplitSpec(1.0, 0.0, 0.0)

    def test_split_matrix(self):
        matrix = build_design_matrix(synthetic_dataset('weekly', days=730), FeatureSpec('weekly', 2))
        train, val, test = split(matrix, SplitSpec(seed=0))
        self.assertEqual(len(train) + len(val) + len(test), len(matrix))
        self.assertEqual(test.period_starts[-1], matrix.period_starts[-1])
        self.assertEqual(train.feature_names, matrix.feature_names)


if __name__ == '__main__':
    unittest.main()
