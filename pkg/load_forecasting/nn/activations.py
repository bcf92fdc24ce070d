""" This module implements the transfer functions of the network and their
derivatives.

Derivatives are written in terms of the activation's *output*, which is what
the backward pass keeps around.
"""

import torch


def linear(x: torch.Tensor) -> torch.Tensor:
    """ Linear activation function (simply returns the input, unchanged). """
    return x


def linear_grad(y: torch.Tensor) -> torch.Tensor:
    return torch.ones_like(y)


def tanh(x: torch.Tensor) -> torch.Tensor:
    """ Hyperbolic tangent, squashing the pre-activation into (-1, 1). """
    return torch.tanh(x)


def tanh_grad(y: torch.Tensor) -> torch.Tensor:
    """ Derivative of :func:`tanh` given its output `y = tanh(x)`. """
    return 1.0 - y * y


ACTIVATIONS = {
    'linear': (linear, linear_grad),
    'tanh': (tanh, tanh_grad),
}

#: Transfer function of the hidden layer.
HIDDEN_ACTIVATION = 'tanh'
#: Transfer function of the output layer.
OUTPUT_ACTIVATION = 'linear'
