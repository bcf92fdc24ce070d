""" Numerical gradients by central finite differences, used to verify
:func:`load_forecasting.nn.network.backward`.
"""

from typing import Tuple

import torch

from load_forecasting.nn.network import (ArrayLike, NetworkParameters, backward,
                                         mse_loss, predict)

#: Floor on the denominator of the relative error, so entries whose true
#:  gradient is ~0 are compared absolutely.
REL_ERROR_FLOOR = 1e-3


def numerical_gradient(params: NetworkParameters, batch_x: ArrayLike, batch_y: ArrayLike,
                       step: float = 1e-5) -> NetworkParameters:
    """ Central difference `(L(p + step) - L(p - step)) / (2 * step)` of the
    batch loss for every entry of `params`.
    """
    topology = params.topology
    flat = params.flatten()
    grad = torch.zeros_like(flat)

    def loss_at(vector):
        return mse_loss(predict(NetworkParameters.unflatten(topology, vector), batch_x), batch_y)

    for i in range(flat.numel()):
        plus, minus = flat.clone(), flat.clone()
        plus[i] += step
        minus[i] -= step
        grad[i] = (loss_at(plus) - loss_at(minus)) / (2.0 * step)
    return NetworkParameters.unflatten(topology, grad)


def relative_error(analytic: NetworkParameters, numeric: NetworkParameters) -> torch.Tensor:
    """ Entry-wise `|a - n| / max(|a|, |n|, REL_ERROR_FLOOR)`. """
    a, n = analytic.flatten(), numeric.flatten()
    denom = torch.clamp(torch.maximum(a.abs(), n.abs()), min=REL_ERROR_FLOOR)
    return (a - n).abs() / denom


def check_gradient(params: NetworkParameters, batch_x: ArrayLike, batch_y: ArrayLike,
                   step: float = 1e-5, tolerance: float = 1e-6) -> Tuple[bool, float]:
    """ Compares the analytic gradient with central finite differences.

    Returns:
        Whether the max relative error is below `tolerance`, and that error.
    """
    err = float(relative_error(backward(params, batch_x, batch_y),
                               numerical_gradient(params, batch_x, batch_y, step)).max())
    return err < tolerance, err
