"""Shared fixtures and pure-python oracles.

The oracles deliberately avoid the compiled kernels and the vectorised
fitting path: event scans are re-implemented as plain loops (plus O(n^2)
re-scan variants for small inputs), and the fit oracle solves the normal
equations with explicit sums.
"""

import math

import numpy as np
import pytest

from ticklaws import GrwConfig, PriceDefinition, TickSeries, generate


def make_series(prices, times=None, instrument="test",
                price_def=PriceDefinition.ARITHMETIC, spread=0.0):
    """Series with the given mid-prices; times default to 1-second spacing."""
    prices = np.asarray(prices, dtype=np.float64)
    if times is None:
        times = np.arange(len(prices), dtype=np.float64)
    half = spread / 2.0
    series, _ = TickSeries.from_quotes(instrument, times,
                                       prices * (1.0 - half), prices * (1.0 + half),
                                       price_def, filter_duplicates=False)
    return series


def random_walk_series(seed, n=500, sigma=0.002, x0=1.0):
    rng = np.random.default_rng(seed)
    prices = x0 + np.cumsum(rng.normal(0.0, sigma, n))
    prices = np.maximum(prices, 0.05)
    return make_series(prices)


def _rel(x, ref, relative):
    return (x - ref) / ref if relative else x - ref


def oracle_price_moves(prices, threshold, relative):
    """Streaming price-move counter in plain python."""
    events = []
    ref = prices[0]
    for i in range(1, len(prices)):
        d = _rel(prices[i], ref, relative)
        if d >= threshold:
            events.append((i, 1))
            ref = prices[i]
        elif d <= -threshold:
            events.append((i, -1))
            ref = prices[i]
    return events


def oracle_dc_rescan(prices, threshold, relative):
    """Directional-change confirmations by naive O(n^2) re-scan.

    At every tick the extremum since the last confirmation is recomputed from
    scratch instead of being carried along.
    """
    out = []
    mode_up = True
    seg_start = 0
    i = 1
    n = len(prices)
    while i < n:
        window = prices[seg_start:i + 1]
        if mode_up:
            ext_off = max(range(len(window)), key=lambda j: window[j])
            x_ext = window[ext_off]
            if _rel(prices[i], x_ext, relative) <= -threshold:
                out.append((i, seg_start + ext_off, -1))
                seg_start = i
                mode_up = False
        else:
            ext_off = min(range(len(window)), key=lambda j: window[j])
            x_ext = window[ext_off]
            if _rel(prices[i], x_ext, relative) >= threshold:
                out.append((i, seg_start + ext_off, 1))
                seg_start = i
                mode_up = True
        i += 1
    return out


def oracle_dc_stream(prices, threshold, relative):
    """Streaming alternating scan in plain python (fast oracle)."""
    out = []
    mode_up = True
    x_ext = prices[0]
    i_ext = 0
    for i in range(1, len(prices)):
        x = prices[i]
        if mode_up:
            if x > x_ext:
                x_ext, i_ext = x, i
            elif _rel(x, x_ext, relative) <= -threshold:
                out.append((i, i_ext, -1))
                x_ext, i_ext, mode_up = x, i, False
        else:
            if x < x_ext:
                x_ext, i_ext = x, i
            elif _rel(x, x_ext, relative) >= threshold:
                out.append((i, i_ext, 1))
                x_ext, i_ext, mode_up = x, i, True
    return out


def oracle_segment_ticks(prices, lo, hi, threshold, relative):
    ref = prices[lo]
    c = 0
    for i in range(lo + 1, hi + 1):
        d = _rel(prices[i], ref, relative)
        if abs(d) >= threshold:
            c += 1
            ref = prices[i]
    return c


def oracle_fit_normal_equations(xs, ys):
    """(E, C, A, B, sA, sB) from explicit normal-equation sums on logs."""
    X = [math.log(x) for x in xs]
    Y = [math.log(y) for y in ys]
    n = len(X)
    sx = sum(X)
    sy = sum(Y)
    sxx = sum(v * v for v in X)
    sxy = sum(u * v for u, v in zip(X, Y))
    det = n * sxx - sx * sx
    B = (n * sxy - sx * sy) / det
    A = (sy * sxx - sx * sxy) / det
    rss = sum((y - A - B * x) ** 2 for x, y in zip(X, Y))
    s2 = rss / (n - 2)
    sA = math.sqrt(s2 * sxx / det)
    sB = math.sqrt(s2 * n / det)
    return B, math.exp(-A / B), A, B, sA, sB


@pytest.fixture(scope="session")
def grw_small():
    """50k-tick benchmark walk, big enough for event statistics."""
    return generate(GrwConfig(n_ticks=50_000, seed=7))
