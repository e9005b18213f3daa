"""Tick ingestion, filtering and price views.

A tick file is CSV with header ``timestamp,bid,ask``: Unix epoch seconds
(fractional part allowed) and positive decimal prices. Consecutive rows whose
mid-price repeats the previous one are dropped at ingestion.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

# Annualization constant: 365.2 days in seconds.
YEAR_SECONDS = 31_553_280.0


class TickDataError(ValueError):
    pass


class MalformedRowError(TickDataError):
    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class NonMonotonicTimeError(TickDataError):
    def __init__(self, row: int, t_prev: float, t: float):
        super().__init__(f"row {row}: timestamp {t} precedes {t_prev}")
        self.row = row


class PriceDefinition(str, Enum):
    """How the quoted (bid, ask) pair maps to a scalar price.

    ARITHMETIC uses x = (bid + ask) / 2 with relative moves (x1 - x0) / x0.
    LOG_GEOMETRIC uses chi = (ln bid + ln ask) / 2 with plain differences.
    """

    ARITHMETIC = "mid"
    LOG_GEOMETRIC = "logmid"


@dataclass(frozen=True)
class Tick:
    timestamp: float
    bid: float
    ask: float

    def __post_init__(self):
        if self.bid <= 0 or self.ask <= 0:
            raise TickDataError(f"non-positive quote: bid={self.bid} ask={self.ask}")


def mid_price(tick: Tick, price_def: PriceDefinition = PriceDefinition.ARITHMETIC) -> float:
    if price_def is PriceDefinition.ARITHMETIC:
        return (tick.bid + tick.ask) / 2.0
    return (np.log(tick.bid) + np.log(tick.ask)) / 2.0


def _mids(bids: np.ndarray, asks: np.ndarray, price_def: PriceDefinition) -> np.ndarray:
    if price_def is PriceDefinition.ARITHMETIC:
        return (bids + asks) / 2.0
    return (np.log(bids) + np.log(asks)) / 2.0


@dataclass
class TickSeries:
    """Immutable, de-duplicated quote stream for one instrument.

    ``prices`` is the scalar price per ``price_def``; event scans measure
    moves relatively for the arithmetic mid and as differences for the
    logarithmic mid (see ``relative_moves``).
    """

    instrument: str
    times: np.ndarray
    bids: np.ndarray
    asks: np.ndarray
    price_def: PriceDefinition = PriceDefinition.ARITHMETIC
    prices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.times = np.ascontiguousarray(self.times, dtype=np.float64)
        self.bids = np.ascontiguousarray(self.bids, dtype=np.float64)
        self.asks = np.ascontiguousarray(self.asks, dtype=np.float64)
        if not (len(self.times) == len(self.bids) == len(self.asks)):
            raise TickDataError("times/bids/asks length mismatch")
        if len(self.times) and (np.any(self.bids <= 0) or np.any(self.asks <= 0)):
            raise TickDataError("non-positive quotes in series")
        if len(self.times) > 1 and np.any(np.diff(self.times) < 0):
            raise TickDataError("timestamps must be non-decreasing")
        self.prices = _mids(self.bids, self.asks, self.price_def)

    @classmethod
    def from_quotes(cls, instrument, times, bids, asks,
                    price_def=PriceDefinition.ARITHMETIC,
                    filter_duplicates=True):
        """Build a series; returns (series, n_dropped).

        With ``filter_duplicates`` rows repeating the previous mid-price are
        removed (synthetic generators may bypass the filter).
        """
        times = np.asarray(times, dtype=np.float64)
        bids = np.asarray(bids, dtype=np.float64)
        asks = np.asarray(asks, dtype=np.float64)
        dropped = 0
        if filter_duplicates and len(times) > 1:
            mids = _mids(bids, asks, price_def)
            keep = np.empty(len(mids), dtype=bool)
            keep[0] = True
            keep[1:] = mids[1:] != mids[:-1]
            dropped = int(len(mids) - keep.sum())
            times, bids, asks = times[keep], bids[keep], asks[keep]
        return cls(instrument, times, bids, asks, price_def), dropped

    def __len__(self) -> int:
        return len(self.times)

    @property
    def span_seconds(self) -> float:
        return float(self.times[-1] - self.times[0]) if len(self) else 0.0

    @property
    def years(self) -> float:
        return self.span_seconds / YEAR_SECONDS

    @property
    def relative_moves(self) -> bool:
        """True when moves are fractions of the price level (arithmetic mid)."""
        return self.price_def is PriceDefinition.ARITHMETIC

    @property
    def relative_spreads(self) -> np.ndarray:
        """(ask - bid) / mid per tick, the round-trip cost proxy."""
        return (self.asks - self.bids) / ((self.asks + self.bids) / 2.0)

    def require_analysable(self):
        if len(self) < 2:
            raise TickDataError(f"series '{self.instrument}' has fewer than 2 ticks")

    def tick(self, i: int) -> Tick:
        return Tick(float(self.times[i]), float(self.bids[i]), float(self.asks[i]))


@dataclass
class IngestReport:
    instrument: str
    rows_read: int
    rows_dropped: int
    span_seconds: float
    years: float
    clamped_timestamps: int = 0

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def _open_source(source):
    if isinstance(source, (str, Path)):
        return open(source, "r", newline=""), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8")), True
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data), True
    raise TickDataError(f"unsupported source type: {type(source)!r}")


def ingest_ticks(source, instrument="unknown",
                 price_def=PriceDefinition.ARITHMETIC,
                 clamp_time=False):
    """Parse a tick CSV into a filtered TickSeries.

    Returns (series, report). Non-monotonic timestamps raise
    NonMonotonicTimeError unless ``clamp_time`` is set, in which case the
    offending timestamp is set equal to its predecessor. Row numbers in
    errors are 1-based over data rows (the header is not counted).
    """
    fh, close = _open_source(source)
    times, bids, asks = [], [], []
    clamped = 0
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise TickDataError("empty input")
        header = [h.strip().lower() for h in header]
        if header != ["timestamp", "bid", "ask"]:
            raise TickDataError(f"expected header 'timestamp,bid,ask', got {','.join(header)}")
        for row_no, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise MalformedRowError(row_no, f"expected 3 fields, got {len(row)}")
            try:
                t, b, a = float(row[0]), float(row[1]), float(row[2])
            except ValueError as exc:
                raise MalformedRowError(row_no, str(exc)) from None
            if b <= 0 or a <= 0:
                raise MalformedRowError(row_no, f"non-positive quote bid={b} ask={a}")
            if times and t < times[-1]:
                if clamp_time:
                    t = times[-1]
                    clamped += 1
                else:
                    raise NonMonotonicTimeError(row_no, times[-1], t)
            times.append(t)
            bids.append(b)
            asks.append(a)
    finally:
        if close:
            fh.close()
    if not times:
        raise TickDataError("empty input")
    series, dropped = TickSeries.from_quotes(instrument, times, bids, asks, price_def)
    report = IngestReport(instrument=instrument, rows_read=len(times),
                          rows_dropped=dropped, span_seconds=series.span_seconds,
                          years=series.years, clamped_timestamps=clamped)
    return series, report


def write_ticks_csv(path, series: TickSeries):
    """Emit the standard tick CSV for a series."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["timestamp", "bid", "ask"])
        for t, b, a in zip(series.times, series.bids, series.asks):
            w.writerow([repr(float(t)), repr(float(b)), repr(float(a))])


def sample_at_intervals(series: TickSeries, dt: float):
    """Previous-tick sampling on the grid t0 + k*dt.

    Returns (grid_times, grid_prices) where each grid point carries the most
    recent price at or before that instant. No value between observed prices
    is ever invented.
    """
    if dt <= 0:
        raise TickDataError(f"dt must be positive, got {dt}")
    series.require_analysable()
    n_points = int(series.span_seconds // dt) + 1
    grid = series.times[0] + dt * np.arange(n_points, dtype=np.float64)
    idx = np.searchsorted(series.times, grid, side="right") - 1
    return grid, series.prices[idx]
