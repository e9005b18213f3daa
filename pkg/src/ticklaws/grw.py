"""Gaussian-random-walk benchmark series.

One million 1-second ticks by default, i.i.d. normal absolute increments
added to the running price. Chosen to mimic a liquid FX rate; bid and ask
coincide unless a constant spread fraction is configured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tickdata import PriceDefinition, TickSeries

PRNG_ALGORITHM = "numpy PCG64"  # recorded in run manifests


@dataclass
class GrwConfig:
    x0: float = 1.336723
    sigma: float = 1.0 / 6769.6
    mu: float = 0.0
    dt: float = 1.0
    n_ticks: int = 1_000_000
    seed: int = 0
    spread: float = 0.0  # constant relative spread, 0 = bid == ask

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")
        if self.n_ticks < 2:
            raise ValueError(f"need at least 2 ticks, got {self.n_ticks}")


def generate(config: GrwConfig = GrwConfig()) -> TickSeries:
    """Generate the benchmark walk; a fixed seed gives a bit-identical series.

    The duplicate-price filter is bypassed: continuous increments almost
    never repeat, and sigma = 0 deliberately yields a constant series.
    """
    rng = np.random.default_rng(config.seed)
    steps = rng.normal(config.mu, config.sigma, config.n_ticks - 1)
    prices = np.empty(config.n_ticks)
    prices[0] = config.x0
    prices[1:] = config.x0 + np.cumsum(steps)
    times = config.dt * np.arange(config.n_ticks, dtype=np.float64)
    half = config.spread / 2.0
    bids = prices * (1.0 - half)
    asks = prices * (1.0 + half)
    series, _ = TickSeries.from_quotes("GRW", times, bids, asks,
                                       PriceDefinition.ARITHMETIC,
                                       filter_duplicates=False)
    return series
