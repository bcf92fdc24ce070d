""" Imports core names of :mod:`load_forecasting.experiments`.
"""

from load_forecasting.experiments.harness import (ExperimentPlan, factor_ablation, lag_sweep, run_repeated,
                                                  run_trial)
from load_forecasting.experiments.hidden_layer import check_capacity, hidden_formula_candidates, hidden_layer_search
from load_forecasting.experiments.metrics import TrialMetrics, compute_metrics
