""" This module implements the :class:`.RunConfig` class, used to handle the
settings of a command-line run: where the data lives, which scale and inputs
to use, how to train and how to split.
"""

import os
from typing import Any, Dict, Optional

import pandas as pd

from load_forecasting.core import constants
from load_forecasting.data.calendar import HourRange


_TRUE = {'1', 'true', 'yes', 'on'}
_FALSE = {'0', 'false', 'no', 'off'}


class RunConfig:
    """ Stores the settings of a run.

    Individual settings can be ignored (default values will be used), written
    in a config file (pathname passed as an argument) or passed as keyword
    arguments. Keyword arguments win over the file, which wins over the
    defaults.

    The config file is flat text with one ``key=value`` per line; ``#`` starts
    a comment. Values are converted to the type of the default: booleans
    accept true/false, yes/no, on/off and 1/0; tuples are comma separated.

    Args:
        file_pathname (Optional[str]): The pathname of a file from where the
            settings should be loaded.
        **kwargs: Accepts any of the attributes listed in
            :attr:`.RunConfig.ATTRIBUTES`. `None` values are ignored, so
            unset command-line flags fall through to the file and defaults.

    Attributes:
        data_dir (str): Directory holding the raw data files.
        consumption_file (str): Consumption CSV, relative to `data_dir`.
        weather_file (str): Weather CSV, relative to `data_dir`.
        holiday_file (str): Holiday list, relative to `data_dir`.
        range_start (str): First hour of the data range (inclusive).
        range_end (str): End of the data range (exclusive).
        scale (str): One of hourly, daily, weekly, monthly.
        lag_count (int): Preceding periods fed to the network.
        include_context (bool): Whether context factors are inputs.
        drop_factors (Tuple[str, ...]): Context factors left out.
        n_hidden (int): Hidden-layer size.
        learning_rate (float): Gradient-descent step size.
        max_epochs (int): Epoch limit.
        patience (int): Epochs without validation improvement before stopping.
        seed (int): First trial seed.
        split (Tuple[float, float, float]): Train, validation and test fractions.
        repeat_count (int): Seeded trials per experiment cell.
        jobs (int): Worker processes running trials.
        out_dir (str): Directory receiving the result files.
        log_interval (int): Epochs between training progress tables.
    """

    #: Attributes supported by the class and their default values.
    ATTRIBUTES = dict(
        # data
        data_dir='data',
        consumption_file='consumption.csv',
        weather_file='weather.csv',
        holiday_file='holidays.txt',
        range_start=constants.RANGE_START.strftime('%Y-%m-%dT%H:%M'),
        range_end=constants.RANGE_END.strftime('%Y-%m-%dT%H:%M'),
        # features
        scale='daily',
        lag_count=7,
        include_context=True,
        drop_factors=(),
        # network and training
        n_hidden=constants.N_HIDDEN,
        learning_rate=constants.LR,
        max_epochs=constants.MAX_EPOCHS,
        patience=constants.PATIENCE,
        seed=constants.SEED,
        # experiment
        split=(constants.TRAIN_FRACTION, constants.VAL_FRACTION, constants.TEST_FRACTION),
        repeat_count=constants.REPEAT_COUNT,
        jobs=1,
        out_dir='results',
        log_interval=constants.LOG_INTERVAL,
    )

    #: Tuple attributes and the type of their elements.
    TUPLE_TYPES = dict(drop_factors=str, split=float)

    def __init__(self,
                 file_pathname: Optional[str] = None,
                 **kwargs) -> None:
        values = dict(type(self).ATTRIBUTES)

        # Loading attributes from file:
        if file_pathname is not None:
            values.update(self._read_file(file_pathname))

        # Validating kwargs:
        for k in kwargs:
            if k not in type(self).ATTRIBUTES:
                raise ValueError(f"Invalid attribute \"{k}\" passed to the "
                                 "config class constructor kwargs!")

        # Reading kwargs:
        for k, v in kwargs.items():
            if v is not None:
                values[k] = self._coerce(k, v)

        self.__dict__.update(values)
        self._validate()

    @classmethod
    def _coerce(cls, key: str, value: Any) -> Any:
        default = cls.ATTRIBUTES[key]
        if isinstance(default, tuple):
            if isinstance(value, str):
                value = [v.strip() for v in value.split(',') if v.strip()]
            return tuple(cls.TUPLE_TYPES[key](v) for v in value)
        if isinstance(default, bool):
            if isinstance(value, str):
                text = value.strip().lower()
                if text in _TRUE:
                    return True
                if text in _FALSE:
                    return False
                raise ValueError(f'{key} expects a boolean, got {value!r}')
            return bool(value)
        return type(default)(value)

    @classmethod
    def _read_file(cls, pathname: str) -> Dict[str, Any]:
        values = {}
        with open(pathname) as f:
            for lineno, line in enumerate(f, start=1):
                text = line.split('#', 1)[0].strip()
                if not text:
                    continue
                key, sep, value = text.partition('=')
                key = key.strip()
                if not sep or key not in cls.ATTRIBUTES:
                    raise ValueError(f'{pathname}:{lineno}: expected key=value with a known key, got {text!r}')
                try:
                    values[key] = cls._coerce(key, value.strip())
                except ValueError as err:
                    raise ValueError(f'{pathname}:{lineno}: {err}') from None
        return values

    def _validate(self):
        if self.scale not in constants.SCALES and self.scale != 'all':
            raise ValueError(f'scale must be one of {", ".join(constants.SCALES)}, got {self.scale!r}')
        if len(self.split) != 3:
            raise ValueError(f'split needs three fractions, got {self.split}')
        for name in ('repeat_count', 'jobs', 'n_hidden', 'log_interval'):
            if getattr(self, name) < 1:
                raise ValueError(f'{name} must be >= 1, got {getattr(self, name)}')

    def path(self, name: str) -> str:
        """ Pathname of one of the raw data files (`consumption_file`,
        `weather_file` or `holiday_file`). Relative names resolve against
        `data_dir`.
        """
        return os.path.join(self.data_dir, getattr(self, name))

    def hour_range(self) -> HourRange:
        return HourRange(pd.Timestamp(self.range_start), pd.Timestamp(self.range_end))

    def to_dict(self) -> Dict[str, Any]:
        return {k: list(v) if isinstance(v, tuple) else v
                for k, v in sorted(self.__dict__.items()) if k in type(self).ATTRIBUTES}

    def __repr__(self):
        return f'RunConfig({", ".join(f"{k}={v!r}" for k, v in self.to_dict().items())})'
