import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oracle_fit_normal_equations
from ticklaws import FitError, fit_loglog, propagate_c_error
from ticklaws.fitting import filter_range, fit_report
from ticklaws.laws import LawId, LawSample


def power_law_samples(E, C, xs):
    return [(x, (x / C) ** E) for x in xs]


def test_noiseless_recovery_exact():
    xs = np.geomspace(0.01, 5.0, 60)
    fit = fit_loglog(power_law_samples(-1.8, 15.0, xs))
    assert fit.E == pytest.approx(-1.8, abs=1e-10)
    assert fit.C == pytest.approx(15.0, rel=1e-10)
    assert abs(fit.r2_curvature) <= 1e-12
    assert fit.r2_adj == pytest.approx(1.0, abs=1e-12)
    assert fit.dE <= 1e-10
    assert fit.dC <= 1e-8


@settings(max_examples=100, deadline=None)
@given(E=st.floats(-3, 3).filter(lambda v: abs(v) > 0.05),
       C=st.floats(1e-3, 1e3),
       k=st.floats(0.01, 100.0))
def test_scale_consistency(E, C, k):
    # abscissa * k  =>  C * k, E unchanged
    xs = np.geomspace(0.5, 50.0, 25)
    base = fit_loglog(power_law_samples(E, C, xs))
    shifted = fit_loglog([(x * k, y) for x, y in power_law_samples(E, C, xs)])
    assert shifted.E == pytest.approx(base.E, abs=1e-10)
    assert shifted.C == pytest.approx(base.C * k, rel=1e-10)


def test_matches_normal_equations_oracle():
    rng = np.random.default_rng(3)
    xs = np.geomspace(0.01, 5.0, 80)
    ys = (xs / 12.0) ** -1.5 * np.exp(rng.normal(0, 0.2, len(xs)))
    fit = fit_loglog(list(zip(xs, ys)))
    B, C, A, _, sA, sB = oracle_fit_normal_equations(xs, ys)
    assert fit.E == pytest.approx(B, abs=1e-10)
    assert fit.C == pytest.approx(C, rel=1e-10)
    assert fit.dE == pytest.approx(sB, rel=1e-8)
    assert fit.intercept == pytest.approx(A, abs=1e-10)
    assert fit.intercept_se == pytest.approx(sA, rel=1e-8)
    assert fit.dC == pytest.approx(propagate_c_error(A, B, sA, sB), rel=1e-10)


def test_propagate_c_error_against_monte_carlo():
    A, B, sA, sB = -2.3, -1.7, 0.004, 0.003
    rng = np.random.default_rng(11)
    n = 400_000
    draws = np.exp(-(A + rng.normal(0, sA, n)) / (B + rng.normal(0, sB, n)))
    assert propagate_c_error(A, B, sA, sB) == pytest.approx(float(np.std(draws)), rel=0.02)


def test_propagate_c_error_zero_b():
    with pytest.raises(FitError):
        propagate_c_error(1.0, 0.0, 0.1, 0.1)


def test_value_at_round_trip():
    xs = np.geomspace(0.1, 10, 20)
    fit = fit_loglog(power_law_samples(0.5, 7.0, xs))
    assert fit.value_at(2.0) == pytest.approx((2.0 / 7.0) ** 0.5, rel=1e-10)


def test_zero_count_samples_excluded():
    xs = np.geomspace(0.1, 10, 20)
    samples = [LawSample(x, (x / 2.0) ** 1.5, 10) for x in xs]
    samples.append(LawSample(20.0, 1e9, 0))  # wild value, count 0: ignored
    fit = fit_loglog(samples)
    assert fit.n_points == 20
    assert fit.E == pytest.approx(1.5, abs=1e-10)


def test_non_positive_values_skipped():
    samples = [(0.1, 1.0), (1.0, 0.0), (2.0, 2.0), (3.0, 3.0)]
    fit = fit_loglog(samples)
    assert fit.n_points == 3


def test_too_few_points_raises():
    with pytest.raises(FitError):
        fit_loglog([(1.0, 1.0), (2.0, 2.0)])


def test_rank_deficient_raises():
    with pytest.raises(FitError):
        fit_loglog([(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)])


def test_curvature_flags_quadratic_input():
    xs = np.geomspace(0.1, 10, 40)
    ys = np.exp(0.3 * np.log(xs) ** 2 + 0.5 * np.log(xs))
    fit = fit_loglog(list(zip(xs, ys)))
    assert fit.r2_curvature > 1e-3


def test_filter_range():
    samples = [LawSample(x, 1.0, 1) for x in (0.1, 0.2, 1.0, 5.0)]
    assert [s.abscissa for s in filter_range(samples, lo=0.2)] == [0.2, 1.0, 5.0]
    assert [s.abscissa for s in filter_range(samples, hi=1.0)] == [0.1, 0.2, 1.0]
    assert [s.abscissa for s in filter_range(samples, lo=0.2, hi=1.0)] == [0.2, 1.0]


def test_fit_report_row():
    xs = np.geomspace(0.01, 5.0, 30)
    samples = [LawSample(x, (x / 15.0) ** -1.8, 5) for x in xs]
    fit, row = fit_report("GRW", LawId.DC_COUNT, samples)
    assert row["instrument"] == "GRW"
    assert row["law"] == "dc_count"
    assert row["E"] == fit.E
    assert row["n_points"] == 30


def test_fit_report_respects_fit_from():
    xs = np.geomspace(0.01, 5.0, 30)
    samples = [LawSample(x, (x / 15.0) ** -1.8, 5) for x in xs]
    fit, _ = fit_report("GRW", LawId.CUM_TM_COST, samples, fit_from=0.2)
    assert fit.n_points == sum(1 for x in xs if x >= 0.2)
