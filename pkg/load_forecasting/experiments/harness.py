""" Seeded trials, repetitions, lag sweeps and factor ablation.

A trial composes the whole pipeline on one dataset: design matrix, split,
normalisation fitted on the training rows, full-batch training, prediction on
the chronological test tail and scoring in kWh. A trial seed drives both the
validation draw and the weight initialisation, so `(plan, dataset, seed)`
determines the result exactly.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from load_forecasting.core.constants import LAG_GRIDS, REPEAT_COUNT
from load_forecasting.data.aggregate import ScaleDataset
from load_forecasting.data.datamodule import (DesignMatrix, EmptyFeatureSetError, FeatureSpec, SplitSpec,
                                              build_design_matrix, split)
from load_forecasting.data.normalization import (NormParams, apply_normalizer, fit_normalizer,
                                                 invert_target)
from load_forecasting.experiments.metrics import TrialMetrics, compute_metrics, mean_metrics
from load_forecasting.experiments.processing import ProcessingScheduler, SerialProcessingScheduler
from load_forecasting.nn.log import StandardOutLogger
from load_forecasting.nn.network import DimensionMismatchError, NetworkParameters, Topology, predict
from load_forecasting.nn.train import TrainConfig, TrainReport, train

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentPlan:
    feature_spec: FeatureSpec
    topology: Topology
    train_config: TrainConfig = field(default_factory=TrainConfig)
    split_spec: SplitSpec = field(default_factory=SplitSpec)
    repeat_count: int = REPEAT_COUNT

    def __post_init__(self):
        if self.topology.n_in != self.feature_spec.width:
            raise DimensionMismatchError(
                f'topology {self.topology} takes {self.topology.n_in} inputs but the feature spec '
                f'yields {self.feature_spec.width}')
        if self.repeat_count < 1:
            raise ValueError(f'repeat_count must be >= 1, got {self.repeat_count}')

    @property
    def seeds(self) -> Tuple[int, ...]:
        seed0 = self.train_config.seed
        return tuple(range(seed0, seed0 + self.repeat_count))

    def with_features(self, spec: FeatureSpec) -> 'ExperimentPlan':
        """ The same plan on other inputs; the input layer follows the spec. """
        return replace(self, feature_spec=spec, topology=replace(self.topology, n_in=spec.width))

    def with_hidden(self, n_hidden: int) -> 'ExperimentPlan':
        return replace(self, topology=replace(self.topology, n_hidden=n_hidden))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'feature_spec': self.feature_spec.to_dict(),
            'topology': str(self.topology),
            'learning_rate': self.train_config.learning_rate,
            'max_epochs': self.train_config.max_epochs,
            'patience': self.train_config.patience,
            'seed': self.train_config.seed,
            'split': [self.split_spec.train_fraction, self.split_spec.val_fraction,
                      self.split_spec.test_fraction],
            'repeat_count': self.repeat_count,
        }


@dataclass(frozen=True, eq=False)
class FittedTrial:
    """ Everything one trial produced, kept for the model bundle and the
    prediction file.
    """
    seed: int
    params: NetworkParameters
    norm_params: NormParams
    report: TrainReport
    test: DesignMatrix
    pred_kwh: np.ndarray
    metrics: TrialMetrics


def fit_trial(plan: ExperimentPlan, dataset: ScaleDataset, seed: int,
              console_logger: Optional[StandardOutLogger] = None) -> FittedTrial:
    matrix = build_design_matrix(dataset, plan.feature_spec)
    train_set, val_set, test_set = split(matrix, plan.split_spec.with_seed(seed))

    norm = fit_normalizer(train_set.x, train_set.y, train_set.feature_names)
    train_xy = apply_normalizer(norm, train_set.x, train_set.y)
    val_xy = apply_normalizer(norm, val_set.x, val_set.y)
    test_x, test_y = apply_normalizer(norm, test_set.x, test_set.y)

    report = train(train_xy, val_xy, plan.topology, replace(plan.train_config, seed=seed), console_logger)
    pred_norm = predict(report.final_params, test_x)
    pred_kwh = invert_target(norm, pred_norm)
    metrics = compute_metrics(pred_kwh, test_set.y, pred_norm, test_y, seed=seed)
    _logger.debug('trial seed %d: %d epochs, accuracy %.3f%%, mse %.6g kWh^2',
                  seed, report.epochs_run, metrics.accuracy_pct, metrics.mse_kwh2)
    return FittedTrial(seed, report.final_params, norm, report, test_set, pred_kwh, metrics)


def run_trial(plan: ExperimentPlan, dataset: ScaleDataset, seed: int) -> TrialMetrics:
    """ Test-set metrics of one seeded trial of `plan` on `dataset`. """
    return fit_trial(plan, dataset, seed).metrics


@dataclass(frozen=True)
class RepeatedResult:
    """ Mean and spread of the metrics over the seeded trials of one plan. """
    mean: TrialMetrics
    trials: Tuple[TrialMetrics, ...]

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    def _values(self, name: str) -> np.ndarray:
        return np.array([getattr(t, name) for t in self.trials])

    @property
    def std(self) -> Dict[str, float]:
        """ Population standard deviation of every metric. """
        return {name: float(np.std(self._values(name)))
                for name in ('accuracy_pct', 'mse_kwh2', 'mse_norm')}

    @property
    def accuracy_range(self) -> Tuple[float, float]:
        values = self._values('accuracy_pct')
        return float(values.min()), float(values.max())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mean': self.mean.to_dict(),
            'std': self.std,
            'accuracy_range': list(self.accuracy_range),
            'trials': [t.to_dict() for t in self.trials],
        }


def _run_item(dataset: ScaleDataset, item: Tuple[ExperimentPlan, int]) -> TrialMetrics:
    plan, seed = item
    return run_trial(plan, dataset, seed)


def run_plans(plans: Sequence[ExperimentPlan], dataset: ScaleDataset,
              scheduler: Optional[ProcessingScheduler] = None) -> List[RepeatedResult]:
    """ Runs every seeded trial of every plan through one scheduler and
    regroups the metrics per plan, in plan order.
    """
    scheduler = scheduler or SerialProcessingScheduler()
    items = [(plan, seed) for plan in plans for seed in plan.seeds]
    metrics = scheduler.run(items, partial(_run_item, dataset))
    results, start = [], 0
    for plan in plans:
        trials = tuple(metrics[start:start + plan.repeat_count])
        start += plan.repeat_count
        results.append(RepeatedResult(mean_metrics(trials), trials))
    return results


def run_repeated(plan: ExperimentPlan, dataset: ScaleDataset,
                 scheduler: Optional[ProcessingScheduler] = None) -> RepeatedResult:
    """ Runs `plan` with seeds `seed0 .. seed0 + repeat_count - 1`, where
    `seed0` is the seed of its training config, and averages the metrics.
    """
    return run_plans([plan], dataset, scheduler)[0]


@dataclass(frozen=True)
class SweepCell:
    lag_count: int
    include_context: bool
    result: RepeatedResult


@dataclass(frozen=True)
class SweepResult:
    scale: str
    cells: Tuple[SweepCell, ...]

    def cell(self, lag_count: int, include_context: bool) -> SweepCell:
        for c in self.cells:
            if c.lag_count == lag_count and c.include_context == include_context:
                return c
        raise KeyError((lag_count, include_context))

    def lags(self, include_context: bool) -> Tuple[int, ...]:
        return tuple(c.lag_count for c in self.cells if c.include_context == include_context)


def sweep_grid(scale: str, grid: Optional[Sequence[int]] = None) -> List[Tuple[int, bool]]:
    """ `(lag_count, include_context)` cells: the whole grid with context,
    then the grid without 0 and without context.
    """
    grid = tuple(LAG_GRIDS[scale] if grid is None else grid)
    return [(lag, True) for lag in grid] + [(lag, False) for lag in grid if lag > 0]


def lag_sweep(scale: str, dataset: ScaleDataset, base_plan: ExperimentPlan,
              scheduler: Optional[ProcessingScheduler] = None,
              grid: Optional[Sequence[int]] = None) -> SweepResult:
    """ Repeats `base_plan` over the lag grid of `scale`, with and without
    context factors. The input layer is resized per cell; everything else in
    the plan is kept.

    Raises:
        InsufficientHistoryError: if a lag leaves no rows to train on.
    """
    if dataset.scale != scale:
        raise ValueError(f'a {scale} sweep needs a {scale} dataset, got {dataset.scale}')
    base = base_plan.feature_spec
    cells = sweep_grid(scale, grid)
    plans = [base_plan.with_features(FeatureSpec(scale, lag, context, base.factor_mask if context else None))
             for lag, context in cells]
    results = run_plans(plans, dataset, scheduler)
    _logger.info('%s sweep done: %d cells x %d trials', scale, len(cells), base_plan.repeat_count)
    return SweepResult(scale, tuple(SweepCell(lag, context, result)
                                    for (lag, context), result in zip(cells, results)))


def best_cell(sweep: SweepResult) -> SweepCell:
    """ The context-on cell with the highest mean accuracy; ties go to the
    lower mean MSE, then to fewer lags.
    """
    candidates = [c for c in sweep.cells if c.include_context]
    if not candidates:
        raise ValueError('sweep has no context-on cells')
    return min(candidates, key=lambda c: (-c.result.mean.accuracy_pct, c.result.mean.mse_kwh2, c.lag_count))


@dataclass(frozen=True)
class FactorDrop:
    factor: str
    result: RepeatedResult
    accuracy_delta: float


@dataclass(frozen=True)
class AblationResult:
    scale: str
    baseline: RepeatedResult
    drops: Tuple[FactorDrop, ...]

    def drop(self, factor: str) -> FactorDrop:
        for d in self.drops:
            if d.factor == factor:
                return d
        raise KeyError(factor)


def factor_ablation(scale: str, dataset: ScaleDataset, base_plan: ExperimentPlan,
                    scheduler: Optional[ProcessingScheduler] = None) -> AblationResult:
    """ Re-runs `base_plan` once per context factor with that factor removed.

    Every run, the baseline included, uses the same seeds, so the accuracy
    deltas are paired.

    Raises:
        EmptyFeatureSetError: if the plan has no lags and a single context
            factor, so its removal leaves no input.
    """
    spec = base_plan.feature_spec
    if not spec.include_context:
        raise ValueError('factor ablation needs a plan with context factors')
    if spec.scale != scale or dataset.scale != scale:
        raise ValueError(f'a {scale} ablation needs a {scale} plan and dataset')
    factors = spec.context_features
    if spec.lag_count == 0 and len(factors) == 1:
        raise EmptyFeatureSetError(f'dropping {factors[0]}, the only input of the plan, leaves nothing to train on')
    plans = [base_plan] + [base_plan.with_features(spec.without(f)) for f in factors]
    baseline, *dropped = run_plans(plans, dataset, scheduler)
    drops = tuple(FactorDrop(f, r, r.mean.accuracy_pct - baseline.mean.accuracy_pct)
                  for f, r in zip(factors, dropped))
    return AblationResult(scale, baseline, drops)
