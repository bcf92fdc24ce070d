""" Accuracy and error measures of test-set predictions. """

from dataclasses import asdict, dataclass
from typing import Any, Dict, Sequence

import numpy as np

from load_forecasting.core.constants import ACCURACY_EPS
from load_forecasting.nn.network import DimensionMismatchError, EmptyInputError, mse_loss


@dataclass(frozen=True)
class TrialMetrics:
    """ Test-set quality of one trained network.

    Attributes:
        accuracy_pct (float): Mean clamped relative accuracy, in percent.
        mse_kwh2 (float): Mean squared error in kWh squared at the period of
            the scale.
        mse_norm (float): Mean squared error of the normalised predictions.
        seed (int): Seed of the trial.
    """
    accuracy_pct: float
    mse_kwh2: float
    mse_norm: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.accuracy_pct <= 100.0:
            raise ValueError(f'accuracy_pct must lie in [0, 100], got {self.accuracy_pct}')
        if self.mse_kwh2 < 0 or self.mse_norm < 0:
            raise ValueError('mean squared errors cannot be negative')

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def accuracy_pct(pred_kwh, actual_kwh, eps: float = ACCURACY_EPS) -> float:
    """ ``100 * mean(max(0, 1 - |pred - actual| / max(|actual|, eps)))`` """
    pred = np.asarray(pred_kwh, dtype=float)
    actual = np.asarray(actual_kwh, dtype=float)
    relative = np.abs(pred - actual) / np.maximum(np.abs(actual), eps)
    return float(100.0 * np.mean(np.maximum(0.0, 1.0 - relative)))


def compute_metrics(pred_kwh: Sequence[float], actual_kwh: Sequence[float],
                    pred_norm: Sequence[float], actual_norm: Sequence[float],
                    seed: int = 0) -> TrialMetrics:
    """
    Raises:
        DimensionMismatchError: if the four vectors differ in length.
        EmptyInputError: if they are empty.
    """
    lengths = {len(np.atleast_1d(v)) for v in (pred_kwh, actual_kwh, pred_norm, actual_norm)}
    if len(lengths) != 1:
        raise DimensionMismatchError(f'prediction and actual vectors differ in length: {sorted(lengths)}')
    if lengths == {0}:
        raise EmptyInputError('no predictions to score')
    return TrialMetrics(
        accuracy_pct=min(100.0, accuracy_pct(pred_kwh, actual_kwh)),
        mse_kwh2=mse_loss(pred_kwh, actual_kwh),
        mse_norm=mse_loss(pred_norm, actual_norm),
        seed=seed,
    )


def mean_metrics(trials: Sequence[TrialMetrics]) -> TrialMetrics:
    """ Arithmetic mean of each metric over `trials`; the seed is the first trial's. """
    if not trials:
        raise EmptyInputError('no trials to average')
    return TrialMetrics(
        accuracy_pct=float(np.mean([t.accuracy_pct for t in trials])),
        mse_kwh2=float(np.mean([t.mse_kwh2 for t in trials])),
        mse_norm=float(np.mean([t.mse_norm for t in trials])),
        seed=trials[0].seed,
    )
