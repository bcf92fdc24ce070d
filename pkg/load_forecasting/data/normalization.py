""" Min-max scaling of features and targets to [-1, 1]. """

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from load_forecasting.nn.network import DimensionMismatchError, EmptyInputError

_logger = logging.getLogger(__name__)

FEATURE_RANGE = (-1.0, 1.0)


@dataclass(frozen=True)
class NormParams:
    """ Per-feature and target `(min, max)` fitted on training rows. """
    feature_min: Tuple[float, ...]
    feature_max: Tuple[float, ...]
    target_min: float
    target_max: float

    def __post_init__(self):
        if len(self.feature_min) != len(self.feature_max):
            raise ValueError('feature_min and feature_max differ in length')
        lo = np.asarray(self.feature_min, dtype=float)
        hi = np.asarray(self.feature_max, dtype=float)
        if (lo > hi).any() or self.target_min > self.target_max:
            raise ValueError('every min must be <= its max')
        object.__setattr__(self, 'feature_min', tuple(float(v) for v in lo))
        object.__setattr__(self, 'feature_max', tuple(float(v) for v in hi))
        object.__setattr__(self, 'target_min', float(self.target_min))
        object.__setattr__(self, 'target_max', float(self.target_max))

    @property
    def width(self) -> int:
        return len(self.feature_min)

    def constant_features(self) -> Tuple[int, ...]:
        return tuple(i for i, (lo, hi) in enumerate(zip(self.feature_min, self.feature_max)) if lo == hi)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'feature_min': list(self.feature_min),
            'feature_max': list(self.feature_max),
            'target_min': self.target_min,
            'target_max': self.target_max,
        }

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> 'NormParams':
        return cls(tuple(doc['feature_min']), tuple(doc['feature_max']),
                   doc['target_min'], doc['target_max'])


def _scale(values: np.ndarray, lo, hi) -> np.ndarray:
    span = np.asarray(hi, dtype=float) - np.asarray(lo, dtype=float)
    a, b = FEATURE_RANGE
    with np.errstate(invalid='ignore', divide='ignore'):
        scaled = (values - lo) * (b - a) / span + a
    # a constant training column carries no information
    return np.where(span > 0, scaled, 0.0)


def fit_normalizer(train_x, train_y, feature_names: Optional[Sequence[str]] = None) -> NormParams:
    """ Records the per-feature and target minimum and maximum over the
    training rows. Constant features are logged; they normalise to 0.

    Raises:
        EmptyInputError: with fewer than two training rows.
    """
    x = np.asarray(train_x, dtype=float)
    y = np.asarray(train_y, dtype=float).reshape(-1)
    if x.ndim != 2 or x.shape[0] < 2:
        raise EmptyInputError(f'need at least 2 training rows to fit a normalizer, got {x.shape}')
    if y.size != x.shape[0]:
        raise DimensionMismatchError(f'{x.shape[0]} training rows but {y.size} targets')

    params = NormParams(tuple(x.min(axis=0)), tuple(x.max(axis=0)), y.min(), y.max())
    for i in params.constant_features():
        name = feature_names[i] if feature_names is not None else f'feature {i}'
        _logger.warning('%s is constant (%g) over the training rows; it is normalised to 0',
                        name, params.feature_min[i])
    if params.target_min == params.target_max:
        _logger.warning('training target is constant (%g)', params.target_min)
    return params


def apply_normalizer(params: NormParams, x, y=None):
    """ Maps features (and targets, if given) linearly so that the training
    minimum lands on -1 and the maximum on +1. Values outside the training
    range fall outside [-1, 1].

    Raises:
        DimensionMismatchError: if the feature width differs from `params`.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1) if params.width else x.reshape(-1, 0)
    if x.shape[1] != params.width:
        raise DimensionMismatchError(f'rows have {x.shape[1]} features, normalizer expects {params.width}')
    x_norm = _scale(x, np.asarray(params.feature_min), np.asarray(params.feature_max))
    if y is None:
        return x_norm
    y_norm = _scale(np.asarray(y, dtype=float), params.target_min, params.target_max)
    return x_norm, y_norm


def invert_target(params: NormParams, y_normalized) -> np.ndarray:
    """ Exact inverse of the target scaling; maps back to kWh. """
    a, b = FEATURE_RANGE
    y = np.asarray(y_normalized, dtype=float)
    return (y - a) * (params.target_max - params.target_min) / (b - a) + params.target_min
