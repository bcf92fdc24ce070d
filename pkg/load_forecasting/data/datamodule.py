""" Lag-window design matrices and the train/validation/test split. """

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from load_forecasting.core.constants import SEED, TEST_FRACTION, TRAIN_FRACTION, VAL_FRACTION
from load_forecasting.data.aggregate import SCHEMAS, ScaleDataset

_logger = logging.getLogger(__name__)


class InsufficientHistoryError(ValueError):
    """ Indicates a dataset with no more rows than the lag window. """


class UnknownFactorError(ValueError):
    """ Indicates a factor name that is not a context column of the scale. """


class EmptyFeatureSetError(ValueError):
    """ Indicates a feature selection with no lag and no context column. """


class TooFewRowsError(ValueError):
    """ Indicates a split that would leave one of its parts empty. """


@dataclass(frozen=True)
class FeatureSpec:
    """ Which inputs feed the network.

    Attributes:
        scale (str): Dataset scale the spec applies to.
        lag_count (int): Number of preceding periods whose consumption is used.
        include_context (bool): Whether the context columns of the target row
            are appended after the lags.
        factor_mask: Context columns to include; `None` means all of them.
    """
    scale: str
    lag_count: int = 0
    include_context: bool = True
    factor_mask: Optional[FrozenSet[str]] = None

    def __post_init__(self):
        if self.scale not in SCHEMAS:
            raise ValueError(f'unknown scale {self.scale!r}')
        if self.lag_count < 0:
            raise ValueError(f'lag_count must be >= 0, got {self.lag_count}')
        if self.factor_mask is not None:
            mask = frozenset(self.factor_mask)
            unknown = sorted(mask - set(SCHEMAS[self.scale][1:]))
            if unknown:
                raise UnknownFactorError(f'{", ".join(unknown)} not among the {self.scale} context '
                                         f'columns ({", ".join(SCHEMAS[self.scale][1:])})')
            object.__setattr__(self, 'factor_mask', mask)
        if self.width < 1:
            raise EmptyFeatureSetError(f'{self} selects no inputs')

    @property
    def context_features(self) -> Tuple[str, ...]:
        """ Included context columns, in schema order. """
        if not self.include_context:
            return ()
        columns = SCHEMAS[self.scale][1:]
        if self.factor_mask is None:
            return columns
        return tuple(c for c in columns if c in self.factor_mask)

    @property
    def width(self) -> int:
        return self.lag_count + len(self.context_features)

    def without(self, factor: str) -> 'FeatureSpec':
        """ The same spec with one context column removed. """
        kept = frozenset(self.context_features) - {factor}
        if factor not in SCHEMAS[self.scale][1:]:
            raise UnknownFactorError(f'{factor} is not a {self.scale} context column')
        return FeatureSpec(self.scale, self.lag_count, self.include_context, kept)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scale': self.scale,
            'lag_count': self.lag_count,
            'include_context': self.include_context,
            'factor_mask': None if self.factor_mask is None else sorted(self.factor_mask),
        }

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> 'FeatureSpec':
        mask = doc.get('factor_mask')
        return cls(doc['scale'], int(doc['lag_count']), bool(doc['include_context']),
                   None if mask is None else frozenset(mask))


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    x: np.ndarray
    y: np.ndarray
    feature_names: Tuple[str, ...]
    period_starts: pd.DatetimeIndex = field(repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(len(self.y), len(self.feature_names))
        y = np.asarray(self.y, dtype=float)
        if len(self.period_starts) != len(y):
            raise ValueError(f'{len(y)} samples but {len(self.period_starts)} timestamps')
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError('design matrix holds non-finite entries')
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'feature_names', tuple(self.feature_names))

    def __len__(self):
        return len(self.y)

    @property
    def width(self) -> int:
        return len(self.feature_names)

    def take(self, indices: Sequence[int]) -> 'DesignMatrix':
        indices = np.asarray(indices, dtype=int)
        return DesignMatrix(self.x[indices], self.y[indices], self.feature_names,
                            self.period_starts[indices])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'feature_names': list(self.feature_names),
            'period_starts': [t.isoformat() for t in self.period_starts],
            'x': self.x.tolist(),
            'y': self.y.tolist(),
        }


def lag_name(target: str, offset: int) -> str:
    return f'{target}[t-{offset}]'


def feature_rows(dataset: ScaleDataset, spec: FeatureSpec) -> Tuple[np.ndarray, pd.DatetimeIndex]:
    """ Input rows for every period that has a full lag window. """
    if dataset.scale != spec.scale:
        raise ValueError(f'feature spec is for {spec.scale} data, dataset is {dataset.scale}')
    n = len(dataset) - spec.lag_count
    if n < 1:
        raise InsufficientHistoryError(f'{spec.lag_count} lags need more than {spec.lag_count} '
                                       f'{dataset.scale} rows, got {len(dataset)}')
    target = dataset.target
    # column j holds the target at period t - lag_count + j
    lags = [target[j:j + n] for j in range(spec.lag_count)]
    context = dataset.frame[list(spec.context_features)].to_numpy(dtype=float)[spec.lag_count:]
    x = np.column_stack(lags + [context]) if lags else context
    return x.reshape(n, spec.width), dataset.period_starts[spec.lag_count:]


def build_design_matrix(dataset: ScaleDataset, spec: FeatureSpec) -> DesignMatrix:
    """ Pairs each period from `lag_count` on with its lag window and context.

    Raises:
        InsufficientHistoryError: if the dataset has no more than `lag_count` rows.
    """
    x, starts = feature_rows(dataset, spec)
    names = [lag_name(dataset.target_column, spec.lag_count - j) for j in range(spec.lag_count)]
    names += list(spec.context_features)
    return DesignMatrix(x, dataset.target[spec.lag_count:], tuple(names), starts)


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5 + 1e-9))


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = TRAIN_FRACTION
    val_fraction: float = VAL_FRACTION
    test_fraction: float = TEST_FRACTION
    seed: int = SEED

    def __post_init__(self):
        fractions = (self.train_fraction, self.val_fraction, self.test_fraction)
        if min(fractions) <= 0:
            raise ValueError(f'split fractions must be positive, got {fractions}')
        if not math.isclose(sum(fractions), 1.0, abs_tol=1e-9):
            raise ValueError(f'split fractions must sum to 1, got {sum(fractions)}')

    def sizes(self, n: int) -> Tuple[int, int, int]:
        """ `(n_train, n_val, n_test)` for `n` rows. """
        n_test = _round_half_up(n * self.test_fraction)
        n_val = _round_half_up((n - n_test) * self.val_fraction / (1 - self.test_fraction))
        n_train = n - n_test - n_val
        if min(n_train, n_val, n_test) < 1:
            raise TooFewRowsError(f'{n} rows cannot be split {self.train_fraction:g}/'
                                  f'{self.val_fraction:g}/{self.test_fraction:g} with every part nonempty')
        return n_train, n_val, n_test

    def with_seed(self, seed: int) -> 'SplitSpec':
        return SplitSpec(self.train_fraction, self.val_fraction, self.test_fraction, seed)


def split_indices(n: int, spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ Test rows are the chronological tail; validation rows are drawn at
    random from the rest; training rows are what remains. All index arrays
    are sorted.
    """
    n_train, n_val, n_test = spec.sizes(n)
    head = n - n_test
    rng = np.random.default_rng(spec.seed)
    val = np.sort(rng.choice(head, size=n_val, replace=False))
    train = np.setdiff1d(np.arange(head), val)
    return train, val, np.arange(head, n)


def split(matrix: DesignMatrix, spec: SplitSpec) -> Tuple[DesignMatrix, DesignMatrix, DesignMatrix]:
    """ Partitions `matrix` into train, validation and test sets.

    Raises:
        TooFewRowsError: if a part would be empty.
    """
    train, val, test = split_indices(len(matrix), spec)
    _logger.debug('split %d rows into %d/%d/%d', len(matrix), len(train), len(val), len(test))
    return matrix.take(train), matrix.take(val), matrix.take(test)
