import contextlib
import io
import json
import os
import tempfile
import unittest
from unittest import TestCase

import numpy as np
import pandas as pd

from load_forecasting.core.cli import get_parser, main
from load_forecasting.experiments import results

RANGE = ['--start', '2016-01-01T00:00', '--end', '2017-01-01T00:00']
FAST = ['--epochs', '40', '--lr', '0.05', '--repeat', '2', '--hidden', '4']


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestCli(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.data = os.path.join(cls.tmp.name, 'data')
        code, _, err = run('synth', '--out', cls.data, *RANGE, '--gap-rate', '0.005', '--sentinel-rate', '0.002',
                           '--block-gaps', '2', '--seed', '3', '--silent')
        assert code == 0, err

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_usage_errors(self):
        self.assertEqual(run()[0], 2)
        self.assertEqual(run('forecast')[0], 2)
        self.assertEqual(run('aggregate', '--scale', 'yearly', '--out', 'x.csv')[0], 2)

    def test_data_error(self):
        code, _, err = run('ingest', '--in', self.path('nowhere'), '--report', self.path('r.json'), *RANGE)
        self.assertEqual(code, 1)
        self.assertIn('error:', err)

    def test_ingest_matches_injection_log(self):
        report_path = self.path('report.json')
        code, _, _ = run('ingest', '--in', self.data, '--report', report_path, '--out', self.path('clean.csv'),
                         *RANGE, '--silent')
        self.assertEqual(code, 0)
        with open(report_path) as f:
            report = json.load(f)
        with open(os.path.join(self.data, 'injection_log.json')) as f:
            log = json.load(f)

        def hours(points, blocks):
            found = set(points)
            for start, end in blocks:
                found.update(pd.date_range(start, end, freq='h').strftime('%Y-%m-%dT%H:%M'))
            return found

        self.assertEqual(hours(report['point_gaps'], report['block_gaps']),
                         hours(log['dropped_hours'], log['block_gaps']))
        self.assertEqual(sorted(map(tuple, report['sentinel_hits'])), sorted(map(tuple, log['sentinels'])))
        self.assertEqual(report['expected_count'], 366 * 24)
        self.assertEqual(len(pd.read_csv(self.path('clean.csv'))), 366 * 24)

    def test_weekly_sweep(self):
        out = self.path('sweep')
        argv = ['sweep', '--in', self.data, *RANGE, '--scale', 'weekly', *FAST, '--out', out, '--silent']
        self.assertEqual(run(*argv)[0], 0)
        frame = results.read_csv(os.path.join(out, 'sweep_weekly.csv'))
        on = frame[frame['context'] == 'on']
        off = frame[frame['context'] == 'off']
        self.assertEqual(on['grid_value'].tolist(), [0, 1, 2, 3, 4, 5])
        self.assertEqual(off['grid_value'].tolist(), [1, 2, 3, 4, 5])
        self.assertTrue((frame['n_trials'] == 2).all())

        with open(os.path.join(out, 'sweep_weekly.csv'), 'rb') as f:
            first_csv = f.read()
        with open(os.path.join(out, 'sweep_weekly.json'), 'rb') as f:
            first_json = f.read()
        self.assertEqual(run(*argv)[0], 0)
        with open(os.path.join(out, 'sweep_weekly.csv'), 'rb') as f:
            self.assertEqual(f.read(), first_csv)
        with open(os.path.join(out, 'sweep_weekly.json'), 'rb') as f:
            self.assertEqual(f.read(), first_json)

    def test_train_then_predict(self):
        dataset = self.path('daily.csv')
        self.assertEqual(run('aggregate', '--in', self.data, *RANGE, '--scale', 'daily', '--out', dataset,
                             '--silent')[0], 0)
        model, predictions = self.path('model.json'), self.path('test_predictions.csv')
        code, _, _ = run('train', '--dataset', dataset, '--scale', 'daily', '--lags', '7', *FAST,
                         '--model', model, '--predictions', predictions, '--silent')
        self.assertEqual(code, 0)
        with open(model) as f:
            bundle = json.load(f)
        self.assertEqual(bundle['feature_spec']['lag_count'], 7)
        self.assertEqual(len(bundle['feature_names']), 15)
        self.assertEqual(len(bundle['network']['w_ih']), 4)

        out = self.path('predicted.csv')
        self.assertEqual(run('predict', '--model', model, '--dataset', dataset, '--out', out)[0], 0)
        predicted = pd.read_csv(out, index_col='period_start')
        self.assertEqual(len(predicted), 366 - 7)
        tail = pd.read_csv(predictions, index_col='period_start')
        np.testing.assert_allclose(predicted.loc[tail.index, 'predicted_kwh'], tail['predicted_kwh'], rtol=1e-8)

        test_set = bundle['test_set']
        self.assertEqual(test_set['feature_names'], bundle['feature_names'])
        self.assertEqual(np.asarray(test_set['x']).shape, (len(tail), 15))
        self.assertTrue(pd.DatetimeIndex(pd.to_datetime(test_set['period_starts'])).equals(
            pd.DatetimeIndex(pd.to_datetime(tail.index))))
        np.testing.assert_allclose(test_set['y'], tail['actual_kwh'], rtol=1e-9)

    def test_predict_rows(self):
        model = self.path('weekly_model.json')
        self.assertEqual(run('train', '--in', self.data, *RANGE, '--scale', 'weekly', '--lags', '0', *FAST,
                             '--model', model, '--silent')[0], 0)
        with open(model) as f:
            names = json.load(f)['feature_names']
        rows = self.path('rows.csv')
        pd.DataFrame([[70.0 + i for i in range(len(names))]], columns=names).to_csv(rows, index=False)
        code, stdout, _ = run('predict', '--model', model, '--rows', rows)
        self.assertEqual(code, 0)
        self.assertEqual(stdout.splitlines()[0], 'row,predicted_kwh')

    def test_search_hidden(self):
        out = self.path('hidden')
        code, _, _ = run('search-hidden', '--in', self.data, *RANGE, '--scale', 'monthly', '--lags', '1',
                         '--epochs', '20', '--repeat', '1', '--hidden-range', '1:3', '--out', out, '--silent')
        self.assertEqual(code, 0)
        frame = results.read_csv(os.path.join(out, 'hidden_monthly.csv'))
        self.assertEqual(frame['grid_value'].tolist(), [1, 2, 3])
        with open(os.path.join(out, 'hidden_monthly.json')) as f:
            doc = json.load(f)
        self.assertIn(doc['best_by_mse'], (1, 2, 3))
        self.assertEqual(doc['config']['scale'], 'monthly')

    def test_holiday_file_flag(self):
        holidays = self.path('only_july_4.txt')
        with open(holidays, 'w') as f:
            f.write('2016-07-04\n')
        out = self.path('daily_july_4.csv')
        self.assertEqual(run('aggregate', '--in', self.data, *RANGE, '--scale', 'daily', '--holidays', holidays,
                             '--out', out, '--silent')[0], 0)
        daily = pd.read_csv(out, index_col='period_start')
        self.assertEqual(daily['is_holiday'].sum(), 1)
        self.assertEqual(daily.loc['2016-07-04T00:00', 'is_holiday'], 1)

    def test_parser_flags(self):
        args = get_parser().parse_args(['ablate', '--scale', 'daily', '--drop-factor', 'is_holiday',
                                        '--drop-factor', 'temp_max', '--split', '0.6,0.2,0.2', '--no-context'])
        self.assertEqual(args.drop_factors, ['is_holiday', 'temp_max'])
        self.assertEqual(args.split, (0.6, 0.2, 0.2))
        self.assertFalse(args.include_context)
        args = get_parser().parse_args(['aggregate', '--holidays', 'calendars/tx.txt', '--out', 'x.csv'])
        self.assertEqual(args.holiday_file, os.path.abspath('calendars/tx.txt'))


if __name__ == '__main__':
    unittest.main()
