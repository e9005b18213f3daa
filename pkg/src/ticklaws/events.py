"""Streaming event detection and total-move dissection.

Two scans drive everything: a price-move counter that resets its reference at
each crossing, and an alternating directional-change scan whose confirmations
dissect the price curve into total-move segments, each split into the
directional-change part (extremum -> confirmation) and the overshoot part
(confirmation -> next extremum).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .tickdata import TickSeries

DEFAULT_TICK_THRESHOLD = 0.0002  # a "tick" is a move larger than 0.02%


class EventError(ValueError):
    pass


def _check_threshold(threshold: float):
    if threshold <= 0:
        raise EventError(f"threshold must be positive, got {threshold}")


@dataclass
class MoveCountResult:
    """Output of the price-move counter at one threshold."""

    threshold: float
    n_up: int
    n_down: int
    indices: np.ndarray
    directions: np.ndarray
    times: np.ndarray

    @property
    def n_events(self) -> int:
        return self.n_up + self.n_down

    @property
    def waiting_times(self) -> np.ndarray:
        return np.diff(self.times)


def price_move_count(series: TickSeries, threshold: float) -> MoveCountResult:
    """Count up/down moves of at least ``threshold`` from the last event price."""
    _check_threshold(threshold)
    series.require_analysable()
    idx, dirs = _kernels.price_move_scan(series.prices, threshold, series.relative_moves)
    return MoveCountResult(
        threshold=threshold,
        n_up=int(np.count_nonzero(dirs > 0)),
        n_down=int(np.count_nonzero(dirs < 0)),
        indices=idx,
        directions=dirs,
        times=series.times[idx],
    )


def count_ticks_within(series: TickSeries, start: int, stop: int,
                       tick_threshold: float = DEFAULT_TICK_THRESHOLD) -> int:
    """Tick count on the contiguous segment [start, stop].

    The counter's reference price is re-initialised at the segment's first
    tick. Segments shorter than two ticks contain no moves.
    """
    _check_threshold(tick_threshold)
    if stop <= start:
        return 0
    return int(_kernels.segment_event_count(series.prices, start, stop,
                                            tick_threshold, series.relative_moves))


def move_segment_tick_counts(series: TickSeries, result: MoveCountResult,
                             tick_threshold: float = DEFAULT_TICK_THRESHOLD) -> np.ndarray:
    """Per-event tick counts for a price-move scan.

    Each event's segment runs from the previous event's confirmation tick
    (or the series start) to its own confirmation tick.
    """
    starts = np.concatenate(([0], result.indices[:-1]))
    return _kernels.segment_event_counts(series.prices, starts, result.indices,
                                         tick_threshold, series.relative_moves)


@dataclass
class DissectionResult:
    """Completed total-move records at one directional-change threshold.

    ``n_up``/``n_down`` count every confirmation; records cover only segments
    whose overshoot end is pinned by the following confirmation, so the first
    and the trailing incomplete segments carry no record. Moves are unsigned
    fractions (or log-price differences), times seconds, ticks counts; the
    total-move columns are exact sums of their parts.
    """

    threshold: float
    n_up: int
    n_down: int
    confirm_indices: np.ndarray
    confirm_times: np.ndarray
    direction: np.ndarray
    dc_move: np.ndarray
    os_move: np.ndarray
    tm_move: np.ndarray
    dc_time: np.ndarray
    os_time: np.ndarray
    tm_time: np.ndarray
    dc_ticks: np.ndarray
    os_ticks: np.ndarray
    tm_ticks: np.ndarray
    spread_at_confirm: np.ndarray
    clamped: int = 0

    @property
    def n_events(self) -> int:
        return self.n_up + self.n_down

    @property
    def n_records(self) -> int:
        return len(self.tm_move)

    @property
    def waiting_times(self) -> np.ndarray:
        return np.diff(self.confirm_times)

    def cost_adjusted(self, spread) -> "DissectionResult":
        """Records with one spread deducted from each total move.

        ``spread`` is either a constant fraction or the string "observed",
        which uses the relative spread quoted at each confirmation tick.
        Negative results clamp to zero; ``clamped`` counts them.
        """
        if isinstance(spread, str):
            if spread != "observed":
                raise EventError(f"unknown spread model: {spread}")
            cost = self.spread_at_confirm
        else:
            cost = float(spread)
        adjusted = self.tm_move - cost
        clamped = int(np.count_nonzero(adjusted < 0))
        return replace(self, tm_move=np.maximum(adjusted, 0.0), clamped=clamped)


def _abs_move(prices, i, j, relative):
    if relative:
        return abs((prices[j] - prices[i]) / prices[i])
    return abs(prices[j] - prices[i])


def directional_change_dissect(series: TickSeries, threshold: float,
                               tick_threshold: float = DEFAULT_TICK_THRESHOLD) -> DissectionResult:
    """Run the alternating scan and dissect the curve into TM = DC + OS records."""
    _check_threshold(threshold)
    series.require_analysable()
    prices = series.prices
    relative = series.relative_moves
    conf, ext, dirs = _kernels.dc_scan(prices, threshold, relative)
    n_events = len(conf)
    n_up = int(np.count_nonzero(dirs > 0))
    n_down = n_events - n_up

    # Record k (for confirmations k = 1 .. K-2): DC spans ext[k] -> conf[k],
    # OS spans conf[k] -> ext[k+1]. Confirmation 0 is excluded because its DC
    # origin is the series start, not a confirmed extremum.
    n_rec = max(n_events - 2, 0)
    lo = 1
    hi = lo + n_rec
    e0 = ext[lo:hi]          # extremum opening each record
    c0 = conf[lo:hi]         # confirmation tick
    e1 = ext[lo + 1:hi + 1]  # extremum closing the overshoot

    if n_rec:
        if relative:
            dc_move = np.abs((prices[c0] - prices[e0]) / prices[e0])
            os_move = np.abs((prices[e1] - prices[c0]) / prices[c0])
        else:
            dc_move = np.abs(prices[c0] - prices[e0])
            os_move = np.abs(prices[e1] - prices[c0])
        dc_time = series.times[c0] - series.times[e0]
        os_time = series.times[e1] - series.times[c0]
        dc_ticks = _kernels.segment_event_counts(prices, e0, c0, tick_threshold, relative)
        os_ticks = _kernels.segment_event_counts(prices, c0, e1, tick_threshold, relative)
        spreads = series.relative_spreads[c0]
    else:
        dc_move = os_move = dc_time = os_time = np.empty(0)
        dc_ticks = os_ticks = np.empty(0, np.int64)
        spreads = np.empty(0)

    return DissectionResult(
        threshold=threshold,
        n_up=n_up,
        n_down=n_down,
        confirm_indices=conf,
        confirm_times=series.times[conf],
        direction=dirs[lo:hi].copy(),
        dc_move=dc_move,
        os_move=os_move,
        tm_move=dc_move + os_move,
        dc_time=dc_time,
        os_time=os_time,
        tm_time=dc_time + os_time,
        dc_ticks=dc_ticks,
        os_ticks=os_ticks,
        tm_ticks=dc_ticks + os_ticks,
        spread_at_confirm=spreads,
    )


def coastline_length(series: TickSeries, threshold: float):
    """Sum of |extremum-to-extremum| moves at a threshold resolution.

    Unlike the record statistics this includes the leading and trailing
    partial segments, so a single move above threshold is always measured.
    Returns (total_move, n_segments).
    """
    _check_threshold(threshold)
    series.require_analysable()
    total, nseg = _kernels.coastline_scan(series.prices, threshold, series.relative_moves)
    return float(total), int(nseg)
