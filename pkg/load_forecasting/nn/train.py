import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from load_forecasting.core.constants import LR, MAX_EPOCHS, PATIENCE, SEED
from load_forecasting.nn.early_stopping import EarlyStopping
from load_forecasting.nn.log import StandardOutLogger
from load_forecasting.nn.network import (ArrayLike, DimensionMismatchError, EmptyInputError,
                                         NetworkParameters, Topology, as_matrix, as_vector,
                                         backward, gd_step, init_parameters, mse_loss, predict)

_logger = logging.getLogger(__name__)


class DivergenceError(ValueError):
    """ Indicates that the loss became non-finite during training. """

    def __init__(self, epoch: int, detail: str = 'loss'):
        super().__init__(f'training diverged at epoch {epoch}: non-finite {detail}')
        self.epoch = epoch


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = LR
    max_epochs: int = MAX_EPOCHS
    patience: int = PATIENCE
    seed: int = SEED

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f'learning_rate must be > 0, got {self.learning_rate}')
        if self.max_epochs < 1:
            raise ValueError(f'max_epochs must be >= 1, got {self.max_epochs}')
        if self.patience < 1:
            raise ValueError(f'patience must be >= 1, got {self.patience}')
        if self.seed < 0:
            raise ValueError(f'seed must be unsigned, got {self.seed}')


@dataclass(frozen=True, eq=False)
class TrainReport:
    epochs_run: int
    train_loss_curve: Tuple[float, ...]
    val_loss_curve: Tuple[float, ...]
    final_params: NetworkParameters
    best_val_loss: float


class Trainer:
    """ Full-batch gradient descent: one :func:`gd_step` per epoch, keeping
    the parameters with the lowest validation loss.
    """

    def __init__(self, topology: Topology, config: TrainConfig,
                 console_logger: Optional[StandardOutLogger] = None):
        self.topology = topology
        self.config = config
        self.console_logger = console_logger

    def _check_set(self, name, data):
        x, y = data
        x = as_matrix(x, self.topology.n_in)
        y = as_vector(y)
        if x.shape[0] == 0:
            raise EmptyInputError(f'{name} set is empty')
        if y.numel() != x.shape[0]:
            raise DimensionMismatchError(f'{name} set has {x.shape[0]} rows but {y.numel()} targets')
        return x, y

    def fit(self, train_set: Tuple[ArrayLike, ArrayLike], val_set: Tuple[ArrayLike, ArrayLike]) -> TrainReport:
        train_x, train_y = self._check_set('training', train_set)
        val_x, val_y = self._check_set('validation', val_set)

        params = init_parameters(self.topology, self.config.seed)
        best_params = params
        stopper = EarlyStopping(patience=self.config.patience)
        train_curve, val_curve = [], []

        for epoch in range(1, self.config.max_epochs + 1):
            try:
                params = gd_step(params, backward(params, train_x, train_y), self.config.learning_rate)
            except ValueError as err:
                if isinstance(err, DimensionMismatchError):
                    raise
                raise DivergenceError(epoch, 'parameters') from err

            train_loss = mse_loss(predict(params, train_x), train_y)
            val_loss = mse_loss(predict(params, val_x), val_y)
            if not (math.isfinite(train_loss) and math.isfinite(val_loss)):
                raise DivergenceError(epoch)
            train_curve.append(train_loss)
            val_curve.append(val_loss)

            if self.console_logger is not None:
                self.console_logger.log(epoch, train_loss, val_loss)

            if stopper.step(val_loss):
                best_params = params
            if not stopper.keep_going:
                _logger.info('early stop at epoch %d (best epoch %d, val loss %.6g)',
                             epoch, stopper.best_epoch, stopper.best)
                break

        return TrainReport(
            epochs_run=len(train_curve),
            train_loss_curve=tuple(train_curve),
            val_loss_curve=tuple(val_curve),
            final_params=best_params,
            best_val_loss=min(val_curve),
        )


def train(train_set: Tuple[ArrayLike, ArrayLike], val_set: Tuple[ArrayLike, ArrayLike],
          topology: Topology, config: TrainConfig,
          console_logger: Optional[StandardOutLogger] = None) -> TrainReport:
    """ Trains a freshly initialised network on `train_set`, early-stopping on
    `val_set`. Both sets are `(x, y)` pairs.

    Raises:
        EmptyInputError: if either set has no rows.
        DivergenceError: if the loss becomes non-finite; carries the epoch.
    """
    return Trainer(topology, config, console_logger).fit(train_set, val_set)
