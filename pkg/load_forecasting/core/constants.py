import pandas as pd

# seed
SEED = 0
# learning rate of the gradient descent update
LR = 0.01
# maximum number of epochs to train the network
MAX_EPOCHS = 1000
# stop after this many epochs without validation improvement
PATIENCE = 25
# initial weights and biases are drawn from [-INIT_RANGE, INIT_RANGE]
INIT_RANGE = 0.5
# nodes in the hidden layer
N_HIDDEN = 15
# fraction of samples used to train the network
TRAIN_FRACTION = 0.70
# fraction of samples used to validate the network
VAL_FRACTION = 0.15
# fraction of samples (the chronological tail) used to test the network
TEST_FRACTION = 0.15
# number of seeded trials averaged per experiment cell
REPEAT_COUNT = 10
# value recorded by the meters and weather stations on measurement failure
SENTINEL = -999.99
# absolute tolerance used when matching the sentinel
SENTINEL_TOL = 1e-6
# guard on the denominator of the relative accuracy
ACCURACY_EPS = 1e-6
# default data range, [start, end)
RANGE_START = pd.Timestamp('2016-01-01T00:00')
RANGE_END = pd.Timestamp('2018-01-01T00:00')
# log training progress every this many epochs
LOG_INTERVAL = 100

# lag grids explored per prediction scale, context factors on
LAG_GRIDS = {
    'hourly': (0, 1, 2, 4, 6, 12, 24),
    'daily': (0, 1, 3, 5, 7, 9, 11, 13),
    'weekly': (0, 1, 2, 3, 4, 5),
    'monthly': (0, 1, 2, 3, 4),
}

SCALES = tuple(LAG_GRIDS)
