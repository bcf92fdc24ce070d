""" Imports core names of :mod:`load_forecasting.data`.
"""

from load_forecasting.data.aggregate import ScaleDataset, build_dataset
from load_forecasting.data.calendar import HolidayCalendar, HourRange, load_holidays
from load_forecasting.data.datamodule import FeatureSpec, SplitSpec, build_design_matrix, split
from load_forecasting.data.ingest import ContinuityReport, parse_hourly_files
from load_forecasting.data.normalization import NormParams, apply_normalizer, fit_normalizer, invert_target
from load_forecasting.data.preprocessing import CleanHourlySeries, load_clean_series
