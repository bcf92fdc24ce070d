import math
import unittest
from unittest import TestCase

from load_forecasting.data.datamodule import FeatureSpec, SplitSpec
from load_forecasting.experiments.harness import ExperimentPlan
from load_forecasting.experiments.hidden_layer import (binomial_sum, check_capacity, hidden_formula_candidates,
                                                       hidden_layer_search)
from load_forecasting.nn.network import Topology
from load_forecasting.nn.train import TrainConfig
from tests.unittests import synthetic_dataset


class TestFormulaCandidates(TestCase):

    def test_fifteen_inputs(self):
        candidates = hidden_formula_candidates(15, 1, 730)
        self.assertEqual(candidates.binomial_sum, 10)
        self.assertEqual(candidates.sqrt_plus_constant, tuple(range(5, 15)))
        self.assertEqual(candidates.log2, 4)
        self.assertEqual(candidates.double_plus_one, 31)
        self.assertFalse(candidates.log2_degenerate)
        self.assertEqual(candidates.all_counts(), tuple(range(4, 15)) + (31,))

    def test_binomial_minimum_by_brute_force(self):
        for n_in, k in ((15, 730), (3, 100), (1, 5), (8, 10000)):
            m = hidden_formula_candidates(n_in, 1, k).binomial_sum
            brute = sum(math.comb(m, i) for i in range(n_in + 1))
            below = sum(math.comb(m - 1, i) for i in range(n_in + 1))
            self.assertGreater(brute, k)
            self.assertLessEqual(below, k)
        self.assertEqual(binomial_sum(10, 15), 1024)

    def test_single_input_is_degenerate(self):
        with self.assertLogs('load_forecasting.experiments.hidden_layer', level='WARNING'):
            candidates = hidden_formula_candidates(1, 1, 50)
        self.assertTrue(candidates.log2_degenerate)
        self.assertEqual(candidates.log2, 1)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            hidden_formula_candidates(0, 1, 10)


class TestCapacity(TestCase):

    def test_no_violation(self):
        self.assertEqual(check_capacity(Topology(15, 15), 511), [])

    def test_both_violated(self):
        rules = {v.rule for v in check_capacity(Topology(15, 600), 511)}
        self.assertEqual(rules, {'hidden_nodes', 'parameters'})

    def test_boundary(self):
        rules = {v.rule for v in check_capacity(Topology(1, 9), 10)}
        self.assertIn('hidden_nodes', rules)
        self.assertNotIn('hidden_nodes', {v.rule for v in check_capacity(Topology(1, 8), 10)})


class TestHiddenLayerSearch(TestCase):

    def test_search(self):
        dataset = synthetic_dataset('monthly', days=731)
        spec = FeatureSpec('monthly', 1, True)
        plan = ExperimentPlan(spec, Topology(spec.width, 2), TrainConfig(learning_rate=0.05, max_epochs=30, seed=0),
                              SplitSpec(), repeat_count=2)
        with self.assertLogs('load_forecasting.experiments.hidden_layer', level='WARNING'):
            result = hidden_layer_search(plan, dataset, [3, 1, 12, 3])
        self.assertEqual([n for n, _ in result.tried], [1, 3, 12])
        mses = {n: r.mean.mse_kwh2 for n, r in result.tried}
        self.assertEqual(result.best_by_mse, min(mses, key=lambda n: (mses[n], n)))
        # 23 rows leave 16 for training, fewer than the 133 parameters of a 9-12-1 network
        self.assertIn(12, {v.n_hidden for v in result.capacity_violations})
        self.assertEqual(result.formula_candidates.double_plus_one, 2 * spec.width + 1)

    def test_empty_range(self):
        dataset = synthetic_dataset('monthly', days=731)
        spec = FeatureSpec('monthly', 0, True)
        with self.assertRaises(ValueError):
            hidden_layer_search(ExperimentPlan(spec, Topology(spec.width, 2)), dataset, [])


if __name__ == '__main__':
    unittest.main()
