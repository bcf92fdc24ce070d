""" Tabular output of model predictions. """

from typing import Optional, Sequence

import numpy as np
import pandas as pd


def predictions_frame(period_starts: Optional[Sequence], predicted_kwh, actual_kwh=None) -> pd.DataFrame:
    """ casts predictions to a dataframe indexed by period start (or by row
    number when the periods are unknown), with the actual consumption and the
    error appended when known
    """
    predicted = np.asarray(predicted_kwh, dtype=float)
    if period_starts is None:
        index = pd.RangeIndex(len(predicted), name='row')
    else:
        index = pd.DatetimeIndex(period_starts, name='period_start')
    frame = pd.DataFrame({'predicted_kwh': predicted}, index=index)
    if actual_kwh is not None:
        frame['actual_kwh'] = np.asarray(actual_kwh, dtype=float)
        frame['error_kwh'] = frame['predicted_kwh'] - frame['actual_kwh']
    return frame


def write_predictions(frame: pd.DataFrame, path=None):
    out = frame.copy()
    if isinstance(out.index, pd.DatetimeIndex):
        out.index = out.index.strftime('%Y-%m-%dT%H:%M')
    return out.to_csv(path, index_label=frame.index.name, float_format='%.10g', lineterminator='\n')
