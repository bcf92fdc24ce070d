""" Imports core names of :mod:`load_forecasting.nn`.
"""

from load_forecasting.nn.network import NetworkParameters, Topology, backward, forward, init_parameters, predict
from load_forecasting.nn.train import TrainConfig, TrainReport, train
