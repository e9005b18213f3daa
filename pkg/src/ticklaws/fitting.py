"""Log-log power-law fitting with curvature diagnostics and error propagation.

A relation y = (x/C)^E is estimated by ordinary least squares on natural logs,
Y = A + B X, with E = B and C = exp(-A/B). A quadratic model is fitted
alongside to flag systematic curvature via the plain R^2 difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class FitError(ValueError):
    pass


@dataclass
class FitResult:
    E: float
    dE: float
    C: float
    dC: float
    r2_adj: float
    r2_curvature: float
    n_points: int
    # log-space coefficients, kept for consistency checks and propagation
    intercept: float = float("nan")
    intercept_se: float = float("nan")

    def value_at(self, x: float) -> float:
        """Evaluate the fitted law at abscissa x (same units as the fit)."""
        return (x / self.C) ** self.E


def propagate_c_error(A: float, B: float, sA: float, sB: float) -> float:
    """First-order standard deviation of C = exp(-A/B) for Gaussian A, B."""
    if B == 0:
        raise FitError("B = 0: scale C = exp(-A/B) undefined")
    c = math.exp(-A / B)
    term_a = c * (-1.0 / B) * sA
    term_b = c * (A / B ** 2) * sB
    return math.sqrt(term_a ** 2 + term_b ** 2)


def _samples_to_arrays(samples):
    xs, ys = [], []
    for s in samples:
        x = getattr(s, "abscissa", None)
        if x is None:
            x, y = s
        else:
            y = s.value
            if getattr(s, "count", 1) < 1:
                continue
        if x > 0 and y > 0:
            xs.append(x)
            ys.append(y)
    return np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64)


def fit_loglog(samples) -> FitResult:
    """OLS power-law fit over (abscissa, value) samples.

    Accepts LawSample sequences or plain (x, y) pairs; non-positive values
    and zero-count samples are a contract violation upstream and are skipped
    here only when carried by LawSample counts.
    """
    x, y = _samples_to_arrays(samples)
    n = len(x)
    if n < 3:
        raise FitError(f"need at least 3 positive samples, got {n}")
    X = np.log(x)
    Y = np.log(y)
    if np.ptp(X) == 0:
        raise FitError("rank-deficient design: all abscissae equal")

    design = np.column_stack([np.ones(n), X])
    coef, _, _, _ = np.linalg.lstsq(design, Y, rcond=None)
    A, B = coef
    resid = Y - design @ coef
    rss = float(resid @ resid)
    tss = float(np.sum((Y - Y.mean()) ** 2))
    r2_lin = 1.0 - rss / tss if tss > 0 else 1.0
    r2_adj = 1.0 - (1.0 - r2_lin) * (n - 1) / (n - 2)

    s2 = rss / (n - 2)
    cov = s2 * np.linalg.inv(design.T @ design)
    sA = math.sqrt(cov[0, 0])
    sB = math.sqrt(cov[1, 1])

    design_q = np.column_stack([np.ones(n), X, X ** 2])
    coef_q, _, _, _ = np.linalg.lstsq(design_q, Y, rcond=None)
    resid_q = Y - design_q @ coef_q
    r2_quad = 1.0 - float(resid_q @ resid_q) / tss if tss > 0 else 1.0

    if B == 0:
        raise FitError("zero exponent: scale undefined")
    C = math.exp(-A / B)
    return FitResult(
        E=float(B),
        dE=sB,
        C=C,
        dC=propagate_c_error(A, B, sA, sB),
        r2_adj=r2_adj,
        r2_curvature=r2_quad - r2_lin,
        n_points=n,
        intercept=float(A),
        intercept_se=sA,
    )


def filter_range(samples, lo=None, hi=None):
    """Restrict samples to abscissae in [lo, hi] (either bound optional)."""
    out = []
    for s in samples:
        x = s.abscissa
        if lo is not None and x < lo:
            continue
        if hi is not None and x > hi:
            continue
        out.append(s)
    return out


def fit_report(instrument: str, law, samples, fit_from=None, fit_to=None):
    """One table-schema row: fit plus its reporting fields.

    ``fit_from``/``fit_to`` restrict the fitted abscissa range (the
    cost-adjusted cumulative law is fitted from 0.2% upward).
    """
    kept = filter_range(samples, fit_from, fit_to)
    fit = fit_loglog(kept)
    row = {
        "instrument": instrument,
        "law": getattr(law, "value", str(law)),
        "E": fit.E,
        "dE": fit.dE,
        "C": fit.C,
        "dC": fit.dC,
        "r2_adj": fit.r2_adj,
        "r2_curvature": fit.r2_curvature,
        "n_points": fit.n_points,
    }
    return fit, row
