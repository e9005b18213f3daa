import math

import numpy as np
import pytest

from conftest import make_series
from ticklaws import (CrossCheck, YEAR_SECONDS, check_count_time,
                      check_dissection, check_inverse, derive_tick_time_law,
                      directional_change_dissect, fit_loglog)
from ticklaws.consistency import (ADDITIVITY_TOL, EXPONENT_TOL, IDENTITY_TOL,
                                  SCALE_TOL)
from ticklaws.fitting import FitError


def fit_exact(E, C, xs):
    return fit_loglog([(x, (x / C) ** E) for x in xs])


def test_crosscheck_build():
    c = CrossCheck.build("t", 1.0, 1.05, 0.1)
    assert c.rel_error == pytest.approx(0.05 / 1.05)
    assert c.passed
    assert not CrossCheck.build("t", 1.0, 2.0, 0.1).passed
    assert CrossCheck.build("t", 0.0, 0.0, 0.1).rel_error == 0.0


def test_count_time_identity_exact():
    # laws constructed to satisfy E_t = -E_N and C_t = Y^(1/E_N) C_N exactly
    xs = np.geomspace(0.01, 5.0, 50)
    E_n, C_n = -1.8, 15.0
    fit_n = fit_exact(E_n, C_n, xs)
    fit_t = fit_exact(-E_n, YEAR_SECONDS ** (1 / E_n) * C_n, xs)
    checks = check_count_time(fit_t, fit_n, "dc")
    assert [c.name for c in checks] == ["count-time-dc-exponent", "count-time-dc-scale"]
    for c in checks:
        assert c.rel_error < 1e-9
        assert c.passed


def test_count_time_detects_mismatch():
    xs = np.geomspace(0.01, 5.0, 50)
    fit_n = fit_exact(-1.8, 15.0, xs)
    fit_t = fit_exact(1.0, 0.007, xs)  # wrong exponent
    checks = check_count_time(fit_t, fit_n)
    assert not checks[0].passed


def test_inverse_identity_exact():
    xs = np.geomspace(20.0, 1e6, 60)
    E_r, C_r = 0.5, 7000.0
    fit_r = fit_exact(E_r, C_r, xs)
    fit_t = fit_exact(1 / E_r, C_r ** (-E_r), xs)
    for c in check_inverse(fit_t, fit_r):
        assert c.rel_error < 1e-9


def test_inverse_zero_exponent_raises():
    xs = np.geomspace(1.0, 10.0, 10)
    fit_t = fit_exact(2.0, 0.1, xs)
    bad = fit_exact(1.0, 1.0, xs)
    bad.E = 0.0
    with pytest.raises(FitError):
        check_inverse(fit_t, bad)


def test_dissection_identities_on_real_records():
    rng = np.random.default_rng(2)
    series = make_series(1.0 + np.cumsum(rng.normal(0, 1e-3, 20_000)))
    d = directional_change_dissect(series, 0.005)
    assert d.n_records > 10
    checks = {c.name: c for c in check_dissection(d)}
    for tag in ("tm", "dc", "os"):
        assert checks[f"avg-vs-cumulative-{tag}"].rel_error <= IDENTITY_TOL
    assert checks["cumulative-additivity"].rel_error <= 1e-15  # exact by construction
    assert checks["cumulative-additivity"].tolerance == ADDITIVITY_TOL


def test_dissection_identities_empty():
    series = make_series([1.0, 1.0001, 1.0])
    d = directional_change_dissect(series, 0.05)
    assert check_dissection(d) == []


def test_derive_tick_time_law():
    xs = np.geomspace(20, 1e5, 30)
    ret = fit_exact(0.5, 7000.0, xs)
    tick = fit_exact(1.9, 0.02, np.geomspace(0.01, 5, 30))
    derived = derive_tick_time_law(ret, tick)
    assert derived.E == pytest.approx(0.5 * 1.9, rel=1e-9)
    assert derived.C == pytest.approx(7000.0 * 0.02 ** (1 / 0.5), rel=1e-9)
    assert math.isnan(derived.dE) and math.isnan(derived.dC)


def test_tolerances_documented_scale():
    assert EXPONENT_TOL == 0.025
    assert SCALE_TOL == 0.10
