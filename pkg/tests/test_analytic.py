from fractions import Fraction
from math import comb, factorial

import mpmath as mp
import pytest

from dalgebra.analytic import (borel_asymptotics, diff_pade_scan, fit_linear_ode,
                               indicial_exponent, radius_estimate, radius_estimate_from_list,
                               singularities, transcendental_critical_point)
from dalgebra.domain import QQ
from dalgebra.errors import InsufficientTerms, NotFound
from dalgebra.generators.named import h1_series
from dalgebra.series import PowerSeries, reduce_mod

CENTRAL = PowerSeries.from_list([comb(2 * n, n) for n in range(301)])   # (1-4x)^(-1/2)


def test_exact_fit_geometric():
    fit = fit_linear_ode(PowerSeries.from_list([1] * 40), 1, 1)
    assert fit.polys == [[-1], [1, -1]]
    assert fit.residual(PowerSeries.from_list([1] * 40)).passed
    assert str(fit) == "(-1*x + 1)*F' + (-1)*F = 0"


def test_exact_fit_h1():
    H = h1_series(80)
    fit = fit_linear_ode(H, 2, 2)
    # x(1-16x) F'' + (1-32x) F' - 4 F = 0
    assert fit.polys == [[-4], [1, -32], [0, 1, -16]]
    rep = singularities(fit)
    assert rep.dominant.location == pytest.approx(0.0625)
    assert abs(rep.dominant.exponent) < 1e-12


def test_exact_fit_not_found_and_too_short():
    with pytest.raises(NotFound):
        fit_linear_ode(h1_series(60), 1, 2)
    with pytest.raises(InsufficientTerms):
        fit_linear_ode(h1_series(12), 2, 2)
    with pytest.raises(ValueError):
        fit_linear_ode(reduce_mod(h1_series(60), 7), 1, 1)


def test_indicial_exponent_of_central_binomial():
    fit = fit_linear_ode(CENTRAL, 1, 1)
    # (1-4x) F' - 2 F = 0: exponent -1/2 at 1/4
    assert indicial_exponent(fit, 0.25) == pytest.approx(-0.5)


def test_approximant_recovers_singularity():
    fits, reports = diff_pade_scan(CENTRAL, [(1, 3), (1, 4), (2, 3)])
    for rep in reports:
        assert rep.dominant.location.real == pytest.approx(0.25, rel=1e-10)
        assert rep.dominant.exponent.real == pytest.approx(-0.5, abs=1e-8)
        assert rep.dominant.stable
    assert all(e.kind == "regular" for e in reports[0].entries if abs(e.location - 0.25) < 1e-6)


def test_radius_estimates():
    r = radius_estimate(CENTRAL)
    assert abs(r.growth - 4) < 1e-10 and r.sign_pattern == "constant"
    assert float(r) == pytest.approx(4)
    alt = PowerSeries.from_list([(-1) ** n * comb(2 * n, n) for n in range(301)])
    ra = radius_estimate(alt)
    assert ra.sign_pattern == "alternating" and abs(ra.growth - 4) < 1e-10
    root = radius_estimate(CENTRAL, "root")
    assert abs(root.growth - 4) < 1e-3
    with pytest.raises(InsufficientTerms):
        radius_estimate_from_list([1] * 20)
    with pytest.raises(ValueError):
        radius_estimate(CENTRAL, "bogus")


def test_critical_point_against_series_bisection():
    xc = transcendental_critical_point()
    # independent route: partial sums of sum binomial(2n,n)^2 x^n and plain bisection
    with mp.workdps(30):
        def g(x):
            return 16 * x * mp.fsum(comb(2 * n, n) ** 2 * x ** n for n in range(400)) - 1
        lo, hi = mp.mpf("0.04"), mp.mpf("0.05")
        for _ in range(60):
            mid = (lo + hi) / 2
            lo, hi = (mid, hi) if g(mid) < 0 else (lo, mid)
    assert abs(xc - float(lo)) < 1e-12
    assert abs(xc - 0.046028337184) < 1e-9


def test_critical_point_custom_function():
    # 16 x * 1/(1 - 16x) = 1 at x = 1/32
    assert transcendental_critical_point(lambda z: 1 / (1 - z), hi=0.05) == pytest.approx(1 / 32)
    with pytest.raises(ValueError):
        transcendental_critical_point(lambda z: -1)


def test_borel_fit_on_synthetic_series():
    N = 400
    c = [0] + [factorial(n) * (2 + Fraction(3, n)) for n in range(1, N + 1)]
    F = PowerSeries(QQ, c)
    val, rep = borel_asymptotics(F)
    assert val == pytest.approx(2, abs=1e-12)
    assert rep["a"][0] == pytest.approx(3, abs=1e-10)
    assert rep["terms"] == N + 1
    with pytest.raises(InsufficientTerms):
        borel_asymptotics(F, N_used=N + 5)
