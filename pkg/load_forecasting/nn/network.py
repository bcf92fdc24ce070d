""" Single-hidden-layer feedforward network trained by backpropagation.

The network maps an input vector `x` to one prediction:

    h = tanh(w_ih @ x + b_h)
    o = w_ho @ h + b_o

All tensors are float64. Parameters are immutable values; every update
returns a new :class:`NetworkParameters`.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np
import torch

from load_forecasting.core.constants import INIT_RANGE
from load_forecasting.nn.activations import (ACTIVATIONS, HIDDEN_ACTIVATION,
                                             OUTPUT_ACTIVATION)

_logger = logging.getLogger(__name__)

DTYPE = torch.float64

ArrayLike = Union[torch.Tensor, np.ndarray, Sequence[float], Sequence[Sequence[float]]]

_hidden_act, _hidden_grad = ACTIVATIONS[HIDDEN_ACTIVATION]
_output_act, _output_grad = ACTIVATIONS[OUTPUT_ACTIVATION]


class DimensionMismatchError(ValueError):
    """ Indicates that an input or a parameter set doesn't fit the network's
    topology.
    """


class EmptyInputError(ValueError):
    """ Indicates that an operation received no samples. """


@dataclass(frozen=True)
class Topology:
    """ Layer sizes of the network.

    Attributes:
        n_in (int): Number of input neurons.
        n_hidden (int): Number of hidden neurons.
        n_out (int): Number of output neurons (always 1 here).
    """
    n_in: int
    n_hidden: int
    n_out: int = 1

    def __post_init__(self):
        for name in ('n_in', 'n_hidden', 'n_out'):
            if int(getattr(self, name)) < 1:
                raise ValueError(f'{name} must be >= 1, got {getattr(self, name)}')
        if self.n_out != 1:
            raise ValueError(f'only a single output node is supported, got n_out={self.n_out}')

    @property
    def shapes(self) -> Dict[str, Tuple[int, ...]]:
        return {
            'w_ih': (self.n_hidden, self.n_in),
            'b_h': (self.n_hidden,),
            'w_ho': (self.n_out, self.n_hidden),
            'b_o': (self.n_out,),
        }

    @property
    def parameter_count(self) -> int:
        """ Number of weights and biases, `(n_in + 1) * n_hidden + (n_hidden + 1) * n_out`. """
        return (self.n_in + 1) * self.n_hidden + (self.n_hidden + 1) * self.n_out

    def __str__(self):
        return f'{self.n_in}-{self.n_hidden}-{self.n_out}'


@dataclass(frozen=True, eq=False)
class NetworkParameters:
    """ Weights and biases of the input -> hidden -> output network.

    Also used to carry gradients, which share the same shapes.
    """
    w_ih: torch.Tensor
    b_h: torch.Tensor
    w_ho: torch.Tensor
    b_o: torch.Tensor

    FIELDS = ('w_ih', 'b_h', 'w_ho', 'b_o')

    def __post_init__(self):
        for name in self.FIELDS:
            object.__setattr__(self, name, torch.as_tensor(getattr(self, name), dtype=DTYPE))
        n_hidden, n_in = self.w_ih.shape
        expected = Topology(n_in, n_hidden, self.w_ho.shape[0]).shapes
        for name in self.FIELDS:
            if tuple(getattr(self, name).shape) != expected[name]:
                raise DimensionMismatchError(
                    f'{name} has shape {tuple(getattr(self, name).shape)}, expected {expected[name]}')
            if not bool(torch.isfinite(getattr(self, name)).all()):
                raise ValueError(f'{name} contains non-finite entries')

    @property
    def topology(self) -> Topology:
        n_hidden, n_in = self.w_ih.shape
        return Topology(n_in=n_in, n_hidden=n_hidden, n_out=self.w_ho.shape[0])

    def flatten(self) -> torch.Tensor:
        return torch.cat([getattr(self, name).reshape(-1) for name in self.FIELDS])

    @classmethod
    def unflatten(cls, topology: Topology, vector: torch.Tensor) -> 'NetworkParameters':
        vector = torch.as_tensor(vector, dtype=DTYPE)
        if vector.numel() != topology.parameter_count:
            raise DimensionMismatchError(
                f'expected {topology.parameter_count} entries for {topology}, got {vector.numel()}')
        parts, offset = {}, 0
        for name, shape in topology.shapes.items():
            size = int(np.prod(shape))
            parts[name] = vector[offset:offset + size].reshape(shape).clone()
            offset += size
        return cls(**parts)

    def equals(self, other: 'NetworkParameters') -> bool:
        """ Bitwise equality of every entry. """
        return all(torch.equal(getattr(self, n), getattr(other, n)) for n in self.FIELDS)

    def to_dict(self) -> Dict[str, Any]:
        """ JSON-ready document: topology plus row-major weight arrays. """
        t = self.topology
        doc = {'topology': {'n_in': t.n_in, 'n_hidden': t.n_hidden, 'n_out': t.n_out}}
        doc.update({name: getattr(self, name).tolist() for name in self.FIELDS})
        return doc

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> 'NetworkParameters':
        params = cls(**{name: doc[name] for name in cls.FIELDS})
        if params.topology != Topology(**doc['topology']):
            raise DimensionMismatchError(
                f'weights describe {params.topology}, document declares {Topology(**doc["topology"])}')
        return params


def init_parameters(topology: Topology, seed: int) -> NetworkParameters:
    """ Draws every weight and bias independently from U[-0.5, 0.5].

    Identical `(topology, seed)` pairs yield bitwise-identical parameters.
    """
    generator = torch.Generator().manual_seed(int(seed))
    parts = {}
    for name, shape in topology.shapes.items():
        u = torch.rand(shape, generator=generator, dtype=DTYPE)
        parts[name] = (2.0 * u - 1.0) * INIT_RANGE
    return NetworkParameters(**parts)


def as_matrix(rows: ArrayLike, n_in: int) -> torch.Tensor:
    x = torch.as_tensor(np.asarray(rows, dtype=np.float64) if not isinstance(rows, torch.Tensor) else rows,
                        dtype=DTYPE)
    if x.numel() == 0:
        return x.reshape(0, n_in)
    if x.dim() != 2 or x.shape[1] != n_in:
        raise DimensionMismatchError(f'expected rows of width {n_in}, got shape {tuple(x.shape)}')
    return x


def as_vector(values: ArrayLike) -> torch.Tensor:
    if isinstance(values, torch.Tensor):
        return values.to(DTYPE).reshape(-1)
    return torch.as_tensor(np.asarray(values, dtype=np.float64), dtype=DTYPE).reshape(-1)


def _forward_batch(params: NetworkParameters, x: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
    hidden = _hidden_act(x @ params.w_ih.T + params.b_h)
    out = _output_act(hidden @ params.w_ho.T + params.b_o)
    return out[:, 0], hidden


def forward(params: NetworkParameters, x: ArrayLike) -> Tuple[float, np.ndarray]:
    """ Propagates one input vector through the network.

    Returns:
        The prediction and the hidden-layer activations.
    """
    x = as_vector(x)
    n_in = params.topology.n_in
    if x.numel() != n_in:
        raise DimensionMismatchError(f'expected an input of length {n_in}, got {x.numel()}')
    out, hidden = _forward_batch(params, x.reshape(1, n_in))
    return float(out[0]), hidden[0].numpy()


def predict(params: NetworkParameters, rows: ArrayLike) -> np.ndarray:
    """ Applies :func:`forward` to every row, preserving order. """
    x = as_matrix(rows, params.topology.n_in)
    if x.shape[0] == 0:
        return np.zeros(0)
    out, _ = _forward_batch(params, x)
    return out.numpy()


def mse_loss(predictions: ArrayLike, targets: ArrayLike) -> float:
    """ Mean squared error, `(1/N) * sum((prediction - target)^2)`. """
    p, t = as_vector(predictions), as_vector(targets)
    if p.numel() == 0 or t.numel() == 0:
        raise EmptyInputError('mse_loss needs at least one prediction')
    if p.numel() != t.numel():
        raise DimensionMismatchError(f'{p.numel()} predictions vs {t.numel()} targets')
    return float(torch.mean((p - t) ** 2))


def backward(params: NetworkParameters, batch_x: ArrayLike, batch_y: ArrayLike) -> NetworkParameters:
    """ Exact gradient of :func:`mse_loss` over the batch with respect to every
    weight and bias.
    """
    topology = params.topology
    x = as_matrix(batch_x, topology.n_in)
    y = as_vector(batch_y)
    n = x.shape[0]
    if n == 0:
        raise EmptyInputError('backward needs a nonempty batch')
    if y.numel() != n:
        raise DimensionMismatchError(f'{n} input rows vs {y.numel()} targets')

    out, hidden = _forward_batch(params, x)
    d_out = (2.0 / n) * (out - y) * _output_grad(out)      # (n,)
    d_w_ho = d_out[None, :] @ hidden                        # (1, n_hidden)
    d_b_o = d_out.sum().reshape(1)
    d_hidden = d_out[:, None] @ params.w_ho                 # (n, n_hidden)
    d_z = d_hidden * _hidden_grad(hidden)
    d_w_ih = d_z.T @ x                                      # (n_hidden, n_in)
    d_b_h = d_z.sum(dim=0)
    return NetworkParameters(w_ih=d_w_ih, b_h=d_b_h, w_ho=d_w_ho, b_o=d_b_o)


def gd_step(params: NetworkParameters, gradients: NetworkParameters,
            learning_rate: float) -> NetworkParameters:
    """ One gradient descent update, `p' = p - learning_rate * g` for every entry. """
    if not learning_rate > 0:
        raise ValueError(f'learning_rate must be > 0, got {learning_rate}')
    if params.topology != gradients.topology:
        raise DimensionMismatchError(
            f'gradients for {gradients.topology} do not match parameters for {params.topology}')
    return NetworkParameters(**{
        name: getattr(params, name) - learning_rate * getattr(gradients, name)
        for name in NetworkParameters.FIELDS
    })
