"""Guessing polynomial equations P(x, F) = 0 satisfied by residue series mod p."""
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ..domain import MODULAR
from ..errors import DAlgebraError, InsufficientTerms, NonPrimeModulus, NotFound, NotUnit
from ..linalg import min_last_vector, nullspace_mod_p
from ..report import ResidualReport
from ..series import PowerSeries, reduce_mod
from .bipoly import BivariatePoly

log = logging.getLogger(__name__)


@dataclass
class GuessBudget:
    """Degree caps, margin T and an optional explicit (dy, dx) scan schedule.

    Without a schedule every dy = 1..dy_max is tried in turn with the largest
    x-degree the available terms allow (capped by dx_max); the smallest
    x-degree relation inside that window is reported.
    """

    dx_max: int = 80
    dy_max: int = 40
    margin: int = 10
    schedule: list = field(default=None)

    def __post_init__(self):
        if self.margin < 1:
            raise ValueError("margin T must be >= 1")


def _check_prime_series(F):
    dom = F.domain
    if dom.kind != MODULAR:
        raise ValueError("algebraic guessing needs a residue series")
    if dom.r != 1:
        raise NonPrimeModulus("guessing needs a prime modulus, got %d^%d" % (dom.p, dom.r))
    return dom.p


def _powers(F, count):
    """F^0 .. F^(count-1) as coefficient arrays (int64, residues)."""
    out = [PowerSeries(F.domain, [1], F.order)]
    for _ in range(count - 1):
        out.append(out[-1] * F)
    return [np.array(s.coeffs, dtype=np.int64) for s in out]


def _system(powers, ys, dx, E, p):
    """Columns ordered x-degree major: column a*len(ys) + t is x^a * F^ys[t]."""
    ny = len(ys)
    M = np.zeros((E, (dx + 1) * ny), dtype=np.int64)
    for a in range(dx + 1):
        for t, b in enumerate(ys):
            M[a:, a * ny + t] = powers[b][:E - a]
    return M % p


def _vector_to_poly(vec, ys, p):
    ny = len(ys)
    terms = {}
    for i, c in enumerate(vec):
        if c:
            terms[(i // ny, ys[i % ny])] = int(c)
    return BivariatePoly(terms, p)


def verify_algebraic(F, P):
    """P(x, F(x)) through order(F): PASS or the first nonzero residual index."""
    res = P.evaluate(F)
    for i, c in enumerate(res):
        if c:
            return ResidualReport(False, len(res) - 1, i, c)
    return ResidualReport(True, len(res) - 1)


def _search_window(F, powers, ys, dx, T, p):
    """Minimal x-degree kernel vector of the window system, or None."""
    E = (dx + 1) * len(ys) + T
    M = _system(powers, ys, dx, E, p)
    vec, idx, dim = min_last_vector(nullspace_mod_p(M, p), p)
    return vec, dim


def guess_algebraic(F, budget=None):
    """Smallest-degree P with P(x, F(x)) = 0 mod p, checked on all of F.

    Raises NotFound with a certificate naming the largest degrees searched.
    """
    budget = budget or GuessBudget()
    p = _check_prime_series(F)
    have = F.order + 1
    T = budget.margin
    t0 = time.time()
    if budget.schedule:
        cells = list(budget.schedule)
    else:
        cells = []
        for dy in range(1, budget.dy_max + 1):
            dx = min(budget.dx_max, (have - T) // (dy + 1) - 1)
            if dx < 0:
                break
            cells.append((dy, dx))
    if not cells:
        raise InsufficientTerms(2 + T, have, "smallest cell (dy=1, dx=0)")
    maxdy = max(dy for dy, _ in cells)
    powers = _powers(F, maxdy + 1)
    searched = []
    spurious = []
    for dy, dx in cells:
        need = (dx + 1) * (dy + 1) + T
        if need > have:
            if budget.schedule:
                raise InsufficientTerms(need, have, "cell dy=%d, dx=%d" % (dy, dx))
            continue
        vec, dim = _search_window(F, powers, list(range(dy + 1)), dx, T, p)
        searched.append((dy, dx))
        if vec is None:
            continue
        P = _vector_to_poly(vec, list(range(dy + 1)), p).normalized()
        rep = verify_algebraic(F, P)
        if not rep.passed:
            log.info("mod %d cell (%d,%d): relation fails at x^%d", p, dy, dx, rep.first_failure)
            spurious.append((dy, dx, rep.first_failure))
            continue
        P_info = {"cell": (dy, dx), "kernel_dimension": dim, "seconds": time.time() - t0,
                  "verified_through": rep.checked_through}
        return _Found(P, P_info)
    dy_b = max((c[0] for c in searched), default=0)
    dx_b = max((c[1] for c in searched), default=0)
    cert = "no relation with dy <= %d, dx <= %d given %d terms mod %d" % (dy_b, dx_b, have, p)
    if spurious:
        cert += " (%d window relations failed full verification)" % len(spurious)
    raise NotFound(cert, searched)


class _Found(BivariatePoly):
    """A BivariatePoly that also remembers how it was found."""

    __slots__ = ("info",)

    def __init__(self, P, info):
        super().__init__(P.terms, P.modulus)
        self.info = info


def guess_frobenius_form(F, n_max=None, dx_max=80, T=10):
    """sum_{n<=n_max} q_n(x) * (F^(p-1))^n = 0 mod p; returns [q_0, ..., q_n_max].

    Only the powers F^(n(p-1)) enter, so the unknown count is
    (n_max+1)(dx+1) instead of ((p-1)n_max+1)(dx+1).
    """
    p = _check_prime_series(F)
    n_max = p - 1 if n_max is None else n_max
    if n_max > p - 1:
        raise ValueError("at most p-1 strata")
    have = F.order + 1
    ys = [n * (p - 1) for n in range(n_max + 1)]
    dx = min(dx_max, (have - T) // len(ys) - 1)
    if dx < 0:
        raise InsufficientTerms(len(ys) + T, have, "Frobenius form with %d strata" % len(ys))
    # powers of G = F^(p-1), computed once
    G = F ** (p - 1)
    pw = [PowerSeries(F.domain, [1], F.order)]
    for _ in range(n_max):
        pw.append(pw[-1] * G)
    powers = {b: np.array(s.coeffs, dtype=np.int64) for b, s in zip(ys, pw)}
    E = (dx + 1) * len(ys) + T
    M = np.zeros((E, (dx + 1) * len(ys)), dtype=np.int64)
    for a in range(dx + 1):
        for t, b in enumerate(ys):
            M[a:, a * len(ys) + t] = powers[b][:E - a]
    vec, idx, dim = min_last_vector(nullspace_mod_p(M % p, p), p)
    if vec is None:
        raise NotFound("no Frobenius-form relation with %d strata, dx <= %d given %d terms mod %d"
                       % (len(ys), dx, have, p))
    P = _vector_to_poly(vec, ys, p).normalized()
    rep = verify_algebraic(F, P)
    if not rep.passed:
        raise NotFound("Frobenius-form relation fits %d terms but fails at x^%d mod %d"
                       % (E, rep.first_failure, p))
    return [P.y_coeff(b) for b in ys]


def frobenius_to_poly(qs, p):
    """Dense BivariatePoly sum q_n y^(n(p-1)) from the stratum coefficients."""
    return BivariatePoly.from_y_coeffs(qs, p, [n * (p - 1) for n in range(len(qs))])


def scan_reduce_and_guess(F, primes, budget=None):
    """Reduce F modulo each prime, guess, verify; one report row per prime."""
    rows = []
    for p in primes:
        row = {"prime": p}
        try:
            Fp = reduce_mod(F, p)
            P = guess_algebraic(Fp, budget)
            row.update(status="found", degrees=P.degrees, poly=P,
                       verified_through=P.info["verified_through"])
        except NotFound as exc:
            row.update(status="not-found", certificate=exc.certificate)
        except (DAlgebraError, NotUnit, ValueError) as exc:
            row.update(status="error", error="%s: %s" % (type(exc).__name__, exc))
        rows.append(row)
    return rows
