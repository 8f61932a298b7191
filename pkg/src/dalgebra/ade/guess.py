"""Guessing algebraic differential equations from series coefficients.

For a form (m, k, d) with functional terms T_1..T_R the unknowns are the
coefficients a_{i,j} of p_i(x) = sum_j a_{i,j} x^j, laid out term-major
(column i*(d+1) + j). Equation e states that the x^e coefficient of
sum_i p_i(x) T_i(x) vanishes; e runs over 0..U+T-1. The kernel is found
modulo word-size primes and lifted to Q by rational reconstruction; the
candidate is then checked exactly against every available coefficient.
"""
import logging
import time
from math import lcm

import numpy as np

from ..domain import MODULAR
from ..errors import InsufficientTerms, NonPrimeModulus, NotFound, SolverOverflowBudget
from ..linalg import min_last_vector, multimodular_kernel_vector, nullspace_mod_p
from ..mult import to_integers
from ..series import PowerSeries
from .forms import AdeForm, enumerate_forms, functional_terms
from .relation import AdeRelation, term_series

log = logging.getLogger(__name__)

DEFAULT_MARGIN = 10


def _check_length(F, form, T):
    need = form.U + form.k + T
    have = F.order + 1
    if have < need:
        raise InsufficientTerms(need, have, "form %s with margin %d" % (form, T))
    return form.U + T


def _degenerate(F, form):
    nonzero = sum(1 for c in F.coeffs if c)
    if nonzero < form.k + 1:
        return "series has %d nonzero terms, fewer than k+1 = %d" % (nonzero, form.k + 1)
    return None


def _matrix(cols, d, E, p):
    """System matrix mod p from term coefficient arrays (each of length >= E)."""
    w = d + 1
    M = np.zeros((E, len(cols) * w), dtype=np.int64)
    for i, t in enumerate(cols):
        t = np.asarray(t[:E], dtype=np.int64)
        for j in range(w):
            M[j:, i * w + j] = t[:E - j]
    return M % p


class _ExactTerms:
    """Exact term series as (integer numerators, common denominator) per term."""

    def __init__(self, F, form):
        self.form = form
        self.series = term_series(F, functional_terms(form), form.k)
        self.n = self.series[0].order
        self.num = []
        self.den = []
        for s in self.series:
            ints, den = to_integers(s.coeffs)
            self.num.append(ints)
            self.den.append(den)

    def mod_p(self, p, E):
        cols = []
        for ints, den in zip(self.num, self.den):
            if den % p == 0:
                return None
            inv = pow(den, -1, p)
            cols.append([c * inv % p for c in ints[:E]])
        return cols

    def residual_zero(self, vec):
        """Exact check of sum p_i T_i = 0 through the full available order."""
        w = self.form.d + 1
        L = 1
        for den in self.den:
            L = lcm(L, den)
        out = [0] * (self.n + 1)
        for i, (ints, den) in enumerate(zip(self.num, self.den)):
            poly = vec[i * w:(i + 1) * w]
            if not any(poly):
                continue
            scale = L // den
            for j, a in enumerate(poly):
                if not a:
                    continue
                a *= scale
                for e in range(j, self.n + 1):
                    out[e] += a * ints[e - j]
        for e, c in enumerate(out):
            if c:
                return e
        return None


def guess_ade(F, form, T=DEFAULT_MARGIN, max_primes=60):
    """Find a relation of shape `form` satisfied by the exact series F.

    Returns an AdeRelation with integer coefficients (content 1). Raises
    NotFound when only the zero relation fits or when the fitted relation
    fails on coefficients beyond the window.
    """
    if F.domain.kind == MODULAR:
        raise ValueError("use guess_ade_modular for residue series")
    E = _check_length(F, form, T)
    why = _degenerate(F, form)
    if why:
        raise NotFound("no relation of form %s: %s" % (form, why))
    t0 = time.time()
    ex = _ExactTerms(F, form)
    failure = {}

    def build(p):
        cols = ex.mod_p(p, E)
        if cols is None:
            return None
        return _matrix(cols, form.d, E, p)

    def verify(vec):
        e = ex.residual_zero(vec)
        if e is not None:
            failure["index"] = e
            log.info("form %s: window relation fails at x^%d, discarded", form, e)
            return False
        return True

    vec, info = multimodular_kernel_vector(build, verify, max_primes=max_primes)
    info.update(equations=E, unknowns=form.U, seconds=time.time() - t0)
    if vec is None:
        if info.get("spurious"):
            raise NotFound("form %s: relation fitting %d coefficients fails at x^%d"
                           % (form, E, failure.get("index", -1)), [info])
        raise NotFound("no relation of form %s given %d terms" % (form, F.order + 1), [info])
    info["verified_through"] = ex.n
    return AdeRelation.from_vector(form, vec, 0, info)


def guess_ade_modular(F, form, T=DEFAULT_MARGIN):
    """Same search with F_p linear algebra; F must be a residue series mod a prime."""
    dom = F.domain
    if dom.kind != MODULAR:
        raise ValueError("guess_ade_modular needs a residue series")
    if dom.r != 1:
        raise NonPrimeModulus("guessing needs a prime modulus, got %d^%d" % (dom.p, dom.r))
    p = dom.p
    E = _check_length(F, form, T)
    why = _degenerate(F, form)
    if why:
        raise NotFound("no relation of form %s mod %d: %s" % (form, p, why))
    t0 = time.time()
    series = term_series(F, functional_terms(form), form.k)
    cols = [s.coeffs for s in series]
    M = _matrix(cols, form.d, E, p)
    vec, idx, dim = min_last_vector(nullspace_mod_p(M, p), p)
    info = {"equations": E, "unknowns": form.U, "dimension": dim, "prime": p}
    if vec is None:
        raise NotFound("no relation of form %s mod %d given %d terms" % (form, p, F.order + 1), [info])
    rel = AdeRelation.from_vector(form, [int(v) for v in vec], p, info)
    n = series[0].order
    out = [0] * (n + 1)
    for i, s in enumerate(series):
        poly = rel.polys[i]
        for j, a in enumerate(poly):
            if a:
                c = s._c
                for e in range(j, n + 1):
                    out[e] += a * c[e - j]
    bad = next((e for e, c in enumerate(out) if c % p), None)
    info["seconds"] = time.time() - t0
    if bad is not None:
        log.info("form %s mod %d: window relation fails at x^%d, discarded", form, p, bad)
        raise NotFound("form %s mod %d: relation fitting %d coefficients fails at x^%d"
                       % (form, p, E, bad), [info])
    info["verified_through"] = n
    return rel


def drop_leading(F, s):
    """Series whose coefficients are those of F shifted down by s positions."""
    if s == 0:
        return F
    if s < 0 or s > F.order:
        raise ValueError("cannot shift by %d" % s)
    return PowerSeries(F.domain, F.coeffs[s:], F.order - s, _raw=True)


def guess_ade_auto(F, T=DEFAULT_MARGIN, exclusions=(), shifts=(0,), forms=None, max_primes=60):
    """Try every maximal form (largest first), optionally on shifted copies of F.

    Returns the first relation found; its info records the shift and the
    forms tried before it. Raises NotFound listing every attempt otherwise.
    Forms contained in a tried maximal form count as covered by it.
    """
    if F.order + 1 <= T:
        raise InsufficientTerms(T + 1, F.order + 1, "auto search")
    modular = F.domain.kind == MODULAR
    tried = []
    for s in shifts:
        G = drop_leading(F, s)
        cand = forms if forms is not None else enumerate_forms(G.order + 1, T, exclusions)
        for form in cand:
            if not isinstance(form, AdeForm):
                form = AdeForm(*form)
            t0 = time.time()
            try:
                if modular:
                    rel = guess_ade_modular(G, form, T)
                else:
                    rel = guess_ade(G, form, T, max_primes)
            except (NotFound, InsufficientTerms, SolverOverflowBudget) as exc:
                tried.append({"shift": s, "form": str(form), "status": type(exc).__name__,
                              "note": str(exc), "seconds": round(time.time() - t0, 3)})
                continue
            tried.append({"shift": s, "form": str(form), "status": "found",
                          "seconds": round(time.time() - t0, 3)})
            rel.info["shift"] = s
            rel.info["tried"] = tried
            return rel
    where = "mod %d" % F.domain.p if modular else "over Q"
    cert = "no relation %s for any of %d forms (shifts %s, margin %d, %d terms)" % (
        where, len(tried), list(shifts), T, F.order + 1)
    raise NotFound(cert, tried)
