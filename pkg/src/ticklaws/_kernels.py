"""Compiled streaming scans over price arrays.

Every kernel takes a ``relative`` flag: True measures a move from a reference
price as (x - ref) / ref (arithmetic mid), False as the plain difference
(logarithmic mid). Kernels release the GIL so threshold sweeps can run on a
thread pool.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _move(x, ref, relative):
    if relative:
        return (x - ref) / ref
    return x - ref


@njit(cache=True, nogil=True)
def price_move_scan(prices, threshold, relative):
    """Count threshold crossings from the last event price.

    The reference price is reset to the current price at each event and is
    never ratcheted in between. Returns (event_indices, directions).
    """
    n = prices.shape[0]
    idx = np.empty(n, np.int64)
    dirs = np.empty(n, np.int8)
    x_ext = prices[0]
    k = 0
    for i in range(1, n):
        d = _move(prices[i], x_ext, relative)
        if d >= threshold:
            idx[k] = i
            dirs[k] = 1
            k += 1
            x_ext = prices[i]
        elif d <= -threshold:
            idx[k] = i
            dirs[k] = -1
            k += 1
            x_ext = prices[i]
    return idx[:k], dirs[:k]


@njit(cache=True, nogil=True)
def dc_scan(prices, threshold, relative):
    """Alternating directional-change scan.

    Starts in up mode with the extremum at the first price. Returns
    (confirm_indices, extremum_indices, directions) where extremum_indices[k]
    is the tick at which the extremum preceding confirmation k was set.
    """
    n = prices.shape[0]
    conf = np.empty(n, np.int64)
    ext = np.empty(n, np.int64)
    dirs = np.empty(n, np.int8)
    mode_up = True
    x_ext = prices[0]
    i_ext = 0
    k = 0
    for i in range(1, n):
        x = prices[i]
        if mode_up:
            if x > x_ext:
                x_ext = x
                i_ext = i
            elif _move(x, x_ext, relative) <= -threshold:
                conf[k] = i
                ext[k] = i_ext
                dirs[k] = -1
                k += 1
                x_ext = x
                i_ext = i
                mode_up = False
        else:
            if x < x_ext:
                x_ext = x
                i_ext = i
            elif _move(x, x_ext, relative) >= threshold:
                conf[k] = i
                ext[k] = i_ext
                dirs[k] = 1
                k += 1
                x_ext = x
                i_ext = i
                mode_up = True
    return conf[:k], ext[:k], dirs[:k]


@njit(cache=True, nogil=True)
def segment_event_count(prices, lo, hi, threshold, relative):
    """Crossing count on prices[lo..hi] with the reference re-set at lo."""
    x_ext = prices[lo]
    c = 0
    for i in range(lo + 1, hi + 1):
        d = _move(prices[i], x_ext, relative)
        if d >= threshold or d <= -threshold:
            c += 1
            x_ext = prices[i]
    return c


@njit(cache=True, nogil=True)
def segment_event_counts(prices, starts, stops, threshold, relative):
    out = np.empty(starts.shape[0], np.int64)
    for j in range(starts.shape[0]):
        out[j] = segment_event_count(prices, starts[j], stops[j], threshold, relative)
    return out


@njit(cache=True, nogil=True)
def coastline_scan(prices, threshold, relative):
    """Sum of |moves| between consecutive dissection extrema.

    Includes the leading run from the first tick and the trailing unconfirmed
    run to the current extremum, so a single monotone move above threshold
    contributes its full size even when no reversal ever confirms.
    Returns (total, n_segments).
    """
    n = prices.shape[0]
    mode_up = True
    x_ext = prices[0]
    i_ext = 0
    prev_ext = 0
    total = 0.0
    nseg = 0
    for i in range(1, n):
        x = prices[i]
        if mode_up:
            if x > x_ext:
                x_ext = x
                i_ext = i
            elif _move(x, x_ext, relative) <= -threshold:
                total += abs(_move(prices[i_ext], prices[prev_ext], relative))
                nseg += 1
                prev_ext = i_ext
                x_ext = x
                i_ext = i
                mode_up = False
        else:
            if x < x_ext:
                x_ext = x
                i_ext = i
            elif _move(x, x_ext, relative) >= threshold:
                total += abs(_move(prices[i_ext], prices[prev_ext], relative))
                nseg += 1
                prev_ext = i_ext
                x_ext = x
                i_ext = i
                mode_up = True
    tail = abs(_move(prices[i_ext], prices[prev_ext], relative))
    if tail > 0.0:
        total += tail
        nseg += 1
    return total, nseg


@njit(cache=True, nogil=True)
def window_extrema(times, prices, t0, dt, n_windows):
    """High, low and start price per non-overlapping window of length dt.

    The path is piecewise constant, so the price carried in from before the
    window start participates in the extrema.
    """
    highs = np.empty(n_windows)
    lows = np.empty(n_windows)
    start_prices = np.empty(n_windows)
    n = times.shape[0]
    j = 0
    carry = prices[0]
    for w in range(n_windows):
        t_end = t0 + (w + 1) * dt
        hi = carry
        lo = carry
        start_prices[w] = carry
        while j < n and times[j] < t_end:
            x = prices[j]
            if x > hi:
                hi = x
            if x < lo:
                lo = x
            carry = x
            j += 1
        highs[w] = hi
        lows[w] = lo
    return highs, lows, start_prices
