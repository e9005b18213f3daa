"""Scaling-law observables on logarithmic threshold and time grids.

Sample units follow the reporting convention of the fit tables: price moves
and thresholds in percent, durations in seconds, event counts per year
(annualised by the series length over Y = 31'553'280 s). Averages and tick
counts are plain numbers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import events, fitting
from .events import DEFAULT_TICK_THRESHOLD
from .tickdata import TickSeries, sample_at_intervals

THRESHOLD_GRID_SIZE = 250
THRESHOLD_GRID_START = 1e-4   # 0.01% as a fraction
THRESHOLD_LOG_STEP = 0.025
TIME_GRID_SIZE = 245
TIME_GRID_START = 20.0        # seconds
TIME_LOG_STEP = 0.05

DAYS_PER_YEAR = 365.2


class LawError(ValueError):
    pass


def threshold_grid() -> np.ndarray:
    """250 thresholds from 0.01% to 5.05%, uniform in natural-log space."""
    return THRESHOLD_GRID_START * np.exp(THRESHOLD_LOG_STEP * np.arange(THRESHOLD_GRID_SIZE))


def time_grid() -> np.ndarray:
    """245 durations from 20 s to 3'975'783 s, uniform in natural-log space."""
    return TIME_GRID_START * np.exp(TIME_LOG_STEP * np.arange(TIME_GRID_SIZE))


class LawId(str, Enum):
    MEAN_RETURN_P1 = "mean_return_p1"
    MEAN_RETURN_P2 = "mean_return_p2"
    DC_COUNT = "dc_count"
    TICK_COUNT = "tick_count"
    MOVE_COUNT = "move_count"
    MAX_RANGE_P1 = "max_range_p1"
    MAX_RANGE_P2 = "max_range_p2"
    TIME_OF_MOVE = "time_of_move"
    TIME_OF_DC = "time_of_dc"
    AVG_MOVE_TM = "avg_move_tm"
    AVG_MOVE_DC = "avg_move_dc"
    AVG_MOVE_OS = "avg_move_os"
    AVG_TIME_TM = "avg_time_tm"
    AVG_TIME_DC = "avg_time_dc"
    AVG_TIME_OS = "avg_time_os"
    AVG_TICKS_TM = "avg_ticks_tm"
    AVG_TICKS_DC = "avg_ticks_dc"
    AVG_TICKS_OS = "avg_ticks_os"
    CUM_TM = "cum_tm"
    CUM_DC = "cum_dc"
    CUM_OS = "cum_os"
    CUM_TM_COST = "cum_tm_cost"
    COASTLINE = "coastline"


TIME_LAWS = (LawId.MEAN_RETURN_P1, LawId.MEAN_RETURN_P2,
             LawId.MAX_RANGE_P1, LawId.MAX_RANGE_P2)
THRESHOLD_LAWS = tuple(law for law in LawId if law not in TIME_LAWS)

# The cost-adjusted cumulative law breaks below transaction-cost scale and is
# fitted from 0.2% upward (abscissae in percent).
COST_LAW_FIT_FROM_PCT = 0.2

# Interval-law estimators are badly log-biased with only a handful of
# non-overlapping windows (a single squared return is chi-squared with one
# degree of freedom), so grid points below this window count are kept in the
# sample dump with count 0 and stay out of fits. The grid end corresponds to
# ~39 windows on a five-year sample, so reference series keep every point.
MIN_INTERVAL_WINDOWS = 30


@dataclass
class LawSample:
    abscissa: float   # threshold in percent, or seconds
    value: float
    count: int


def p_mean(values: np.ndarray, p: int) -> float:
    return float(np.mean(np.abs(values) ** p) ** (1.0 / p))


def mean_abs_return(series: TickSeries, dt: float, p: int = 1) -> LawSample:
    """p-mean absolute return over consecutive non-overlapping dt intervals."""
    if p not in (1, 2):
        raise LawError(f"p must be 1 or 2, got {p}")
    _, prices = sample_at_intervals(series, dt)
    if len(prices) < 2:
        raise LawError(f"dt={dt} leaves fewer than 2 grid samples")
    if series.relative_moves:
        returns = np.diff(prices) / prices[:-1]
    else:
        returns = np.diff(prices)
    return LawSample(abscissa=dt, value=p_mean(returns, p) * 100.0, count=len(returns))


def max_range(series: TickSeries, dt: float, p: int = 1) -> LawSample:
    """p-mean of the high-low range per non-overlapping dt window.

    The range is normalised by the window-start price for the arithmetic mid;
    log mid-prices use the plain high-low difference. Windows without ticks
    hold the carried-in constant price and contribute zero range.
    """
    if p not in (1, 2):
        raise LawError(f"p must be 1 or 2, got {p}")
    if dt <= 0:
        raise LawError(f"dt must be positive, got {dt}")
    series.require_analysable()
    n_windows = int(series.span_seconds // dt)
    if n_windows < 1:
        raise LawError(f"dt={dt} exceeds the series span")
    from ._kernels import window_extrema
    highs, lows, starts = window_extrema(series.times, series.prices,
                                         series.times[0], dt, n_windows)
    ranges = highs - lows
    if series.relative_moves:
        ranges = ranges / starts
    return LawSample(abscissa=dt, value=p_mean(ranges, p) * 100.0, count=n_windows)


def time_law_samples(series: TickSeries, grid=None,
                     min_windows: int = MIN_INTERVAL_WINDOWS):
    """Samples for the interval-parameterised laws over the time grid.

    Points backed by fewer than ``min_windows`` non-overlapping windows keep
    their measured value but carry count 0, which excludes them from fits.
    """
    if grid is None:
        grid = time_grid()
    out = {law: [] for law in TIME_LAWS}
    for dt in map(float, grid):
        for law, p in ((LawId.MEAN_RETURN_P1, 1), (LawId.MEAN_RETURN_P2, 2)):
            try:
                sample = mean_abs_return(series, dt, p)
            except LawError:
                sample = LawSample(dt, 0.0, 0)
            if sample.count < min_windows:
                sample = LawSample(sample.abscissa, sample.value, 0)
            out[law].append(sample)
        for law, p in ((LawId.MAX_RANGE_P1, 1), (LawId.MAX_RANGE_P2, 2)):
            try:
                sample = max_range(series, dt, p)
            except LawError:
                sample = LawSample(dt, 0.0, 0)
            if sample.count < min_windows:
                sample = LawSample(sample.abscissa, sample.value, 0)
            out[law].append(sample)
    return out


def _mean_sample(pct, values, scale=1.0) -> LawSample:
    if len(values) == 0:
        return LawSample(pct, 0.0, 0)
    return LawSample(pct, float(np.mean(values)) * scale, len(values))


def _threshold_pass(series, threshold, tick_threshold, spread):
    """All threshold-law samples at a single grid point."""
    pct = threshold * 100.0
    years = series.years
    samples = {}

    mc = events.price_move_count(series, threshold)
    samples[LawId.MOVE_COUNT] = LawSample(pct, mc.n_events / years, mc.n_events)
    waits = mc.waiting_times
    samples[LawId.TIME_OF_MOVE] = _mean_sample(pct, waits)
    if mc.n_events:
        ticks = events.move_segment_tick_counts(series, mc, tick_threshold)
        samples[LawId.TICK_COUNT] = _mean_sample(pct, ticks)
    else:
        samples[LawId.TICK_COUNT] = LawSample(pct, 0.0, 0)

    diss = events.directional_change_dissect(series, threshold, tick_threshold)
    samples[LawId.DC_COUNT] = LawSample(pct, diss.n_events / years, diss.n_events)
    samples[LawId.TIME_OF_DC] = _mean_sample(pct, diss.waiting_times)
    for law, moves in ((LawId.AVG_MOVE_TM, diss.tm_move),
                       (LawId.AVG_MOVE_DC, diss.dc_move),
                       (LawId.AVG_MOVE_OS, diss.os_move)):
        samples[law] = _mean_sample(pct, moves, scale=100.0)
    for law, times in ((LawId.AVG_TIME_TM, diss.tm_time),
                       (LawId.AVG_TIME_DC, diss.dc_time),
                       (LawId.AVG_TIME_OS, diss.os_time)):
        samples[law] = _mean_sample(pct, times)
    for law, ticks in ((LawId.AVG_TICKS_TM, diss.tm_ticks),
                       (LawId.AVG_TICKS_DC, diss.dc_ticks),
                       (LawId.AVG_TICKS_OS, diss.os_ticks)):
        samples[law] = _mean_sample(pct, ticks)
    for law, moves in ((LawId.CUM_TM, diss.tm_move),
                       (LawId.CUM_DC, diss.dc_move),
                       (LawId.CUM_OS, diss.os_move)):
        samples[law] = LawSample(pct, float(np.sum(moves)) * 100.0 / years, len(moves))
    adj = diss.cost_adjusted(spread)
    samples[LawId.CUM_TM_COST] = LawSample(pct, float(np.sum(adj.tm_move)) * 100.0 / years,
                                           adj.n_records)
    total, nseg = events.coastline_length(series, threshold)
    samples[LawId.COASTLINE] = LawSample(pct, total * 100.0 / years, nseg)
    return samples


def threshold_law_samples(series: TickSeries, grid=None,
                          tick_threshold: float = DEFAULT_TICK_THRESHOLD,
                          spread=DEFAULT_TICK_THRESHOLD, jobs: int = 1):
    """Samples for every threshold-parameterised law over the grid.

    One price-move scan and one dissection run per grid point; with jobs > 1
    grid points run on a thread pool (the scans release the GIL) and results
    are re-assembled in grid order.
    """
    if grid is None:
        grid = threshold_grid()
    fn = lambda thr: _threshold_pass(series, float(thr), tick_threshold, spread)
    if jobs > 1:
        # warm the compiled kernels before fanning out
        fn(float(grid[0]))
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_point = list(pool.map(fn, grid))
    else:
        per_point = [fn(thr) for thr in grid]
    return {law: [point[law] for point in per_point] for law in THRESHOLD_LAWS}


def law_over_thresholds(series: TickSeries, law: LawId, grid=None,
                        tick_threshold: float = DEFAULT_TICK_THRESHOLD,
                        spread=DEFAULT_TICK_THRESHOLD, jobs: int = 1):
    """Samples for a single threshold-parameterised law."""
    if law in TIME_LAWS:
        raise LawError(f"{law.value} is parameterised by time intervals, not thresholds")
    return threshold_law_samples(series, grid, tick_threshold, spread, jobs)[law]


def cost_adjust(dissection, spread):
    """Total moves with one round-trip spread deducted (clamped at zero)."""
    return dissection.cost_adjusted(spread)


@dataclass
class CoastlineRow:
    threshold_pct: float
    annual_pct: float          # from the fitted cumulative total-move law
    daily_pct: float
    measured_annual_pct: float # direct extremum-to-extremum sum, NaN if none
    cost_annual_pct: float     # from the cost-adjusted law fitted >= 0.2%
    cost_daily_pct: float
    n_segments: int
    extrapolated: bool         # cost value extrapolated below the fit range
    below_granularity: bool


def coastline_report(series: TickSeries, thresholds,
                     tick_threshold: float = DEFAULT_TICK_THRESHOLD,
                     spread=DEFAULT_TICK_THRESHOLD,
                     samples=None, jobs: int = 1):
    """Annualised and daily coastline length per threshold.

    The headline values come from the fitted coastline law over the full
    threshold grid (the direct sum of all extremum-to-extremum segments,
    which stays unbiased where confirmed events are sparse); measured sums
    are also reported where segments exist. The cost-adjusted column uses
    the law fitted on [0.2%, 5%] and is marked extrapolated below that range.
    """
    thresholds = list(thresholds)
    for thr in thresholds:
        if not 0 < thr <= 0.1:
            raise LawError(f"coastline thresholds must lie in (0, 0.1], got {thr}")
    if samples is None:
        samples = threshold_law_samples(series, tick_threshold=tick_threshold,
                                        spread=spread, jobs=jobs)
    try:
        fit_cum = fitting.fit_loglog(samples.get(LawId.COASTLINE, []))
    except fitting.FitError:
        fit_cum = None
    try:
        fit_cost = fitting.fit_loglog(fitting.filter_range(
            samples.get(LawId.CUM_TM_COST, []), lo=COST_LAW_FIT_FROM_PCT))
    except fitting.FitError:
        fit_cost = None

    rows = []
    for thr in thresholds:
        pct = thr * 100.0
        measured, nseg = events.coastline_length(series, thr)
        annual = fit_cum.value_at(pct) if fit_cum else math.nan
        cost = fit_cost.value_at(pct) if fit_cost else math.nan
        rows.append(CoastlineRow(
            threshold_pct=pct,
            annual_pct=annual,
            daily_pct=annual / DAYS_PER_YEAR,
            measured_annual_pct=(measured * 100.0 / series.years) if nseg else math.nan,
            cost_annual_pct=cost,
            cost_daily_pct=cost / DAYS_PER_YEAR,
            n_segments=nseg,
            extrapolated=pct < COST_LAW_FIT_FROM_PCT,
            below_granularity=nseg == 0,
        ))
    return rows
