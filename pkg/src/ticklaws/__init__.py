"""Event-based scaling-law analytics for tick-by-tick price series."""

from .consistency import (CrossCheck, check_count_time, check_dissection,
                          check_inverse, derive_tick_time_law)
from .events import (DEFAULT_TICK_THRESHOLD, DissectionResult, EventError,
                     MoveCountResult, coastline_length, count_ticks_within,
                     directional_change_dissect, move_segment_tick_counts,
                     price_move_count)
from .fitting import FitError, FitResult, fit_loglog, fit_report, propagate_c_error
from .grw import GrwConfig, generate
from .laws import (LawId, LawSample, coastline_report, cost_adjust,
                   law_over_thresholds, max_range, mean_abs_return,
                   threshold_grid, threshold_law_samples, time_grid,
                   time_law_samples)
from .tickdata import (YEAR_SECONDS, IngestReport, PriceDefinition, Tick,
                       TickDataError, TickSeries, ingest_ticks, mid_price,
                       sample_at_intervals)

__version__ = "0.1.0"

__all__ = [
    "CrossCheck", "check_count_time", "check_dissection", "check_inverse",
    "derive_tick_time_law",
    "DEFAULT_TICK_THRESHOLD", "DissectionResult", "EventError", "MoveCountResult",
    "coastline_length", "count_ticks_within", "directional_change_dissect",
    "move_segment_tick_counts", "price_move_count",
    "FitError", "FitResult", "fit_loglog", "fit_report", "propagate_c_error",
    "GrwConfig", "generate",
    "LawId", "LawSample", "coastline_report", "cost_adjust",
    "law_over_thresholds", "max_range", "mean_abs_return", "threshold_grid",
    "threshold_law_samples", "time_grid", "time_law_samples",
    "YEAR_SECONDS", "IngestReport", "PriceDefinition", "Tick",
    "TickDataError", "TickSeries", "ingest_ticks", "mid_price",
    "sample_at_intervals",
]
