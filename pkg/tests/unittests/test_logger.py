import contextlib
import io
import unittest
from unittest import TestCase

from load_forecasting.nn.log import StandardOutLogger, make_table_row, results_table


class TestMakeTableRow(TestCase):

    def test_first_row_has_no_past(self):
        self.assertEqual(make_table_row('Training Error', 0.5, None), ['Training Error', '5.0000E-01', '-', '-', '-'])

    def test_increase_columns(self):
        row = make_table_row('Validation Error', 0.75, 0.5, colors=False)
        self.assertEqual(row[2], '5.0000E-01')
        self.assertEqual(row[3], '+2.50E-01')
        self.assertEqual(row[4], '+50.00%')

    def test_colors(self):
        better = make_table_row('x', 0.25, 0.5)
        self.assertIn('\x1b[32m', better[3])
        worse = make_table_row('x', 0.75, 0.5)
        self.assertIn('\x1b[31m', worse[3])


class TestStandardOutLogger(TestCase):

    def _log_epochs(self, logger, epochs):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            tables = [logger.log(e, 1.0 / e, 2.0 / e) for e in epochs]
        return tables, out.getvalue()

    def test_logs_on_interval(self):
        logger = StandardOutLogger(log_interval=5, colored_text=False)
        tables, printed = self._log_epochs(logger, range(1, 11))
        self.assertEqual([i + 1 for i, t in enumerate(tables) if t is not None], [5, 10])
        self.assertIn('epoch 5', printed)
        self.assertIn('epoch 10', printed)
        self.assertEqual(logger.past_val_error, 0.2)

    def test_silent(self):
        logger = StandardOutLogger(log_interval=1, silent=True)
        tables, printed = self._log_epochs(logger, range(1, 4))
        self.assertEqual(tables, [None, None, None])
        self.assertEqual(printed, '')
        self.assertEqual(logger.curr_train_error, 1.0 / 3)

    def test_force(self):
        logger = StandardOutLogger(log_interval=100, colored_text=False)
        with contextlib.redirect_stdout(io.StringIO()):
            self.assertIsNotNone(logger.log(7, 0.1, 0.2, force=True))


class TestResultsTable(TestCase):

    def test_formats_floats(self):
        table = results_table(['lags', 'accuracy'], [[0, 91.23456], [3, 95.0]])
        self.assertIn('91.2346', table)
        self.assertIn('95.0000', table)
        self.assertIn('LAGS', table.upper())


if __name__ == '__main__':
    unittest.main()
