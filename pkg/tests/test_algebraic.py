from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dalgebra.algebraic.bipoly import BivariatePoly, read_poly, write_poly
from dalgebra.algebraic.guess import (GuessBudget, frobenius_to_poly, guess_algebraic,
                                      guess_frobenius_form, scan_reduce_and_guess,
                                      verify_algebraic)
from dalgebra.algebraic.resultant import resultant_eliminate
from dalgebra.domain import QQ, Zmod
from dalgebra.errors import InsufficientTerms, NonPrimeModulus, NotFound, ZeroResultant
from dalgebra.generators.tutte import tutte_normalized, tutte_series
from dalgebra.series import PowerSeries, reduce_mod

CATALAN = PowerSeries.from_list([comb(2 * n, n) // (n + 1) for n in range(301)])


def fixed_point(a, b, c, p, N):
    """F = x*(a + b*F + c*F^2) mod p, by iteration."""
    dom = Zmod(p)
    F = PowerSeries(dom, [0] * (N + 1))
    x = PowerSeries(dom, [0, 1] + [0] * (N - 1))
    for _ in range(N + 1):
        F = x * (PowerSeries(dom, [a] + [0] * N) + F.scale(b) + (F * F).scale(c))
    return F


# bivariate polynomials

def test_bipoly_parse_and_degrees():
    P = BivariatePoly.from_expr("x*F^2 - F + 1")
    assert P.terms == {(1, 2): 1, (0, 1): -1, (0, 0): 1}
    assert P.degrees == (2, 1)
    assert P.leading() == (1, 2)
    assert BivariatePoly.from_expr("x*F^2 - F + 1", 7).terms[(0, 1)] == 6
    assert BivariatePoly.from_expr("F/2 + x", 5).terms[(0, 1)] == 3


def test_bipoly_normalization():
    P = BivariatePoly.from_expr("-4*x*y^2 + 6*y - 2")
    assert P.normalized() == BivariatePoly.from_expr("2*x*y^2 - 3*y + 1")
    Q = BivariatePoly.from_expr("3*x*y^2 + y", 7).normalized()
    assert Q.terms[(1, 2)] == 1
    assert Q.same_up_to_unit(BivariatePoly.from_expr("6*x*y^2 + 2*y", 7))


def test_bipoly_file_round_trip(tmp_path):
    P = BivariatePoly.from_expr("(x^2+2*x+2)*F^4+2*(x+1)*F^2+2*(x+1)", 3)
    write_poly(P, tmp_path / "p")
    assert read_poly(tmp_path / "p") == P
    Z = BivariatePoly.from_expr("x*F^2 - 10^30*F + 1")
    write_poly(Z, tmp_path / "z")
    assert read_poly(tmp_path / "z") == Z


def test_evaluate_exact_and_modular():
    P = BivariatePoly.from_expr("x*F^2 - F + 1")
    assert not any(P.evaluate(CATALAN))
    assert verify_algebraic(reduce_mod(CATALAN, 5), P.reduce(5)).passed
    bad = BivariatePoly.from_expr("x*F^2 - F + 1 + x^7")
    rep = verify_algebraic(CATALAN, bad)
    assert not rep.passed and rep.first_failure == 7
    assert "FAIL at x^7" in str(rep)


# guessing

@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 101, 32749])
def test_catalan_relation(p):
    P = guess_algebraic(reduce_mod(CATALAN, p))
    assert P.same_up_to_unit(BivariatePoly.from_expr("x*F^2 - F + 1", p))
    assert P.info["verified_through"] == 300


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 6), st.integers(0, 6), st.integers(1, 6), st.sampled_from([7, 11, 13]))
def test_guessed_relation_divides_the_known_one(a, b, c, p):
    F = fixed_point(a, b, c, p, 150)
    P = guess_algebraic(F)
    assert verify_algebraic(F, P).passed
    assert P.deg_y <= 2 and P.deg_x <= 1
    known = BivariatePoly.from_expr("x*(%d + %d*F + %d*F^2) - F" % (a, b, c), p)
    # both are annihilators of minimal y-degree, so they agree up to a unit
    if P.deg_y == 2:
        assert P.same_up_to_unit(known)


def test_guess_errors():
    with pytest.raises(NonPrimeModulus):
        guess_algebraic(reduce_mod(CATALAN, 9))
    with pytest.raises(ValueError):
        guess_algebraic(CATALAN)
    with pytest.raises(InsufficientTerms):
        guess_algebraic(reduce_mod(CATALAN.truncate(8), 7))


def test_not_found_certificate():
    import random
    rnd = random.Random(5)
    F = PowerSeries(Zmod(5), [rnd.randrange(5) for _ in range(200)])
    with pytest.raises(NotFound) as exc:
        guess_algebraic(F, GuessBudget(dx_max=10, dy_max=6))
    cert = exc.value.certificate
    assert "dy <= 6" in cert and "dx <= 10" in cert and "200 terms mod 5" in cert


def test_explicit_schedule_needs_enough_terms():
    F = reduce_mod(CATALAN.truncate(40), 7)
    with pytest.raises(InsufficientTerms):
        guess_algebraic(F, GuessBudget(schedule=[(4, 20)]))
    assert guess_algebraic(F, GuessBudget(schedule=[(2, 1)])).degrees == (2, 1)


def test_scan_rows():
    rows = scan_reduce_and_guess(CATALAN, [3, 5, 9])
    assert [r["status"] for r in rows] == ["found", "found", "error"]
    assert rows[0]["degrees"] == (2, 1)


def test_frobenius_form_catalan():
    p = 7
    F = reduce_mod(CATALAN, p)
    qs = guess_frobenius_form(F)
    assert len(qs) == p
    assert verify_algebraic(F, frobenius_to_poly(qs, p)).passed


def test_tutte_q_minus_one_mod_5():
    """A small golden case: the normalized series for q = -1 reduced mod 5."""
    F = reduce_mod(tutte_normalized(-1, 300), 5)
    P = guess_algebraic(F)
    expect = BivariatePoly.from_expr("2*x^3*(2+x+x^2)+x*F+F^2", 5)
    assert P.same_up_to_unit(expect)


def test_verification_is_only_as_long_as_the_series():
    # with 300 terms the dy=3 window leaves 62 checks, and a cubic fits them
    # by accident; more terms expose it and give the true sextic
    from dalgebra.generators.recurrence import convolution_series
    from dalgebra.generators.tutte import divergent_c1_spec
    S = reduce_mod(convolution_series(divergent_c1_spec(), 1000), 5)
    short = guess_algebraic(S.truncate(300))
    assert short.degrees == (3, 56)
    rep = verify_algebraic(S, short)
    assert not rep.passed and rep.first_failure == 317
    assert guess_algebraic(S.truncate(400)).degrees == (6, 10)


def test_raw_and_normalized_series_give_equivalent_relations():
    raw = reduce_mod(tutte_series(5, 300), 11)
    norm = reduce_mod(tutte_normalized(5, 300), 11)
    P, Q = guess_algebraic(raw), guess_algebraic(norm)
    assert P.degrees == Q.degrees == (3, 5)
    # F_raw = 20 * F_norm, so P(x, 20*y) is a unit multiple of Q
    scaled = BivariatePoly({(a, b): c * pow(20, b, 11) for (a, b), c in P.terms.items()}, 11)
    assert scaled.same_up_to_unit(Q)


# resultants

def test_resultant_against_sympy():
    got = resultant_eliminate("z - A1 - A2", "A1^2 - x", "A2^2 - 1 - x", 0)
    x, z, a1, a2 = sympy.symbols("x z A1 A2")
    r = sympy.resultant(sympy.resultant(z - a1 - a2, a1 ** 2 - x, a1), a2 ** 2 - 1 - x, a2)
    expect = BivariatePoly({m: int(c) for m, c in sympy.Poly(r, x, z).terms()})
    assert got == expect
    assert got.same_up_to_unit(BivariatePoly.from_expr("y^4 - 2*(2*x+1)*y^2 + 1"))


def test_resultant_annihilates_the_series():
    # z = sqrt(x + 1/4) + sqrt(1 + x) around x = 0, with A1 = sqrt(1/4 + x)
    P = resultant_eliminate("z - A1 - A2", "4*A1^2 - 1 - 4*x", "A2^2 - 1 - x", 0)
    a1 = PowerSeries(QQ, [Fraction(1, 4), 1] + [0] * 38).sqrt()
    a2 = PowerSeries(QQ, [1, 1] + [0] * 38).sqrt()
    Z = a1 + a2
    assert verify_algebraic(Z, P).passed
    assert verify_algebraic(reduce_mod(Z, 7), P.reduce(7)).passed


def test_resultant_errors():
    with pytest.raises(ZeroResultant):
        resultant_eliminate("A1^2 - x", "A1^2 - x", "A2 - 1", 7)
    with pytest.raises(ValueError):
        resultant_eliminate("z - A1", "A1 - A2", "A2 - 1", 7)
    with pytest.raises(ValueError):
        resultant_eliminate("z - A1", "A1 - x", "A2 - 1", 9)
