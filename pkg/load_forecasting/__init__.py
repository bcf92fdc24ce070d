__all__ = [ ]


try:
    from load_forecasting.core import constants
    __all__ += ['constants']
except ImportError:
    pass

try:
    from load_forecasting import data
    __all__ += ['data']
except ImportError:
    pass

try:
    from load_forecasting import nn
    __all__ += ['nn']
except ImportError:
    pass

try:
    from load_forecasting import experiments
    __all__ += ['experiments']
except ImportError:
    pass
