"""Floating-point companions: diff-Pade fits, singularities, growth rates, Borel fits.

Fitting is exact wherever possible; mpmath carries the approximate fits and
the extrapolations, numpy only finds head-polynomial roots.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .domain import MODULAR
from .errors import InsufficientTerms, NotFound
from .linalg import multimodular_kernel_vector
from .report import ResidualReport

log = logging.getLogger(__name__)

DEFAULT_DPS = 60


def _exact_coeffs(F):
    if F.domain.kind == MODULAR:
        raise ValueError("analytic tools need integer or rational coefficients")
    return [Fraction(c) for c in F.coeffs]


def _mpf(c):
    c = Fraction(c)
    if c.denominator == 1:
        return mp.mpf(c.numerator)
    return mp.mpf(c.numerator) / c.denominator


def _falling(m, j):
    """(m+1)(m+2)...(m+j), the factor turning c_{m+j} into [x^m] F^(j)."""
    v = 1
    for k in range(1, j + 1):
        v *= m + k
    return v


# ---------------------------------------------------------------- linear ODE fits

@dataclass
class LinearOdeFit:
    """sum_j A_j(x) F^(j)(x) = 0 with polys[j] the coefficients of A_j.

    Exact fits carry Fractions (integers after clearing denominators);
    approximate fits carry mpf values. `scale` is the argument scaling the
    approximate fit was computed in (x = scale * t); polys are always in x.
    """

    order: int
    degree: int
    polys: list
    exact: bool
    window: int
    scale: object = 1
    info: dict = field(default_factory=dict)

    @property
    def head(self):
        return self.polys[self.order]

    def scaled_polys(self):
        """Coefficients in t = x / scale (better conditioned for root finding)."""
        s = mp.mpf(self.scale) if not self.exact else 1
        return [[c * s ** (i - j) for i, c in enumerate(p)] for j, p in enumerate(self.polys)]

    def residual(self, F):
        """Exact residual of the fitted equation along all of F (exact fits only)."""
        if not self.exact:
            raise ValueError("residuals of approximate fits are not exact")
        c = _exact_coeffs(F)
        N = len(c) - 1 - self.order
        res = []
        for n in range(N + 1):
            s = Fraction(0)
            for j, p in enumerate(self.polys):
                for i, a in enumerate(p):
                    if a and i <= n:
                        s += a * _falling(n - i, j) * c[n - i + j]
            res.append(s)
        for n, v in enumerate(res):
            if v:
                return ResidualReport(False, N, n, v)
        return ResidualReport(True, N)

    def pretty(self):
        parts = []
        for j in range(self.order, -1, -1):
            p = self.polys[j]
            mons = []
            for i in range(len(p) - 1, -1, -1):
                a = p[i]
                if not a:
                    continue
                a = str(a) if self.exact else mp.nstr(a, 8)
                mons.append(a + ("" if i == 0 else "*x" if i == 1 else "*x^%d" % i))
            if not mons:
                continue
            d = "F" if j == 0 else "F'" if j == 1 else "F^(%d)" % j
            parts.append("(%s)*%s" % (" + ".join(mons), d))
        return " + ".join(parts) + " = 0"

    __str__ = pretty


def _column(q, i, j):
    # degree-major so the canonical kernel vector has the smallest degree
    return i * (q + 1) + j


def fit_linear_ode(F, order, degree, window=None, margin=10, exact=True, scale=None,
                   dps=DEFAULT_DPS, max_primes=60):
    """Fit sum_{j<=order} A_j(x) F^(j) = 0 with deg A_j <= degree.

    exact=True solves the window exactly (multimodular, degree-minimal
    kernel vector) and re-verifies along all of F; NotFound otherwise.
    exact=False computes a differential approximant: one kernel vector of
    the square-minus-one system, in mpmath at `dps` digits, with the
    argument rescaled by `scale` (default: reciprocal of the ratio estimate).
    """
    q, D = order, degree
    c = _exact_coeffs(F)
    U = (q + 1) * (D + 1)
    avail = len(c) - q        # equations n = 0 .. N - q
    if exact:
        need = U + margin
        rows = need if window is None else window
        if rows < need or rows > avail:
            raise InsufficientTerms(need + q, len(c), "linear ODE order %d degree %d" % (q, D))
    else:
        rows = U - 1 if window is None else window
        if rows < U - 1 or rows > avail:
            raise InsufficientTerms(U - 1 + q, len(c), "approximant order %d degree %d" % (q, D))
    if exact:
        return _fit_exact(F, c, q, D, rows, max_primes)
    return _fit_approx(c, q, D, rows, scale, dps)


def _fit_exact(F, c, q, D, rows, max_primes):
    U = (q + 1) * (D + 1)

    def build(p):
        vals = []
        for v in c[:rows + q]:
            if v.denominator % p == 0:
                return None
            vals.append(v.numerator * pow(v.denominator, -1, p) % p)
        M = np.zeros((rows, U), dtype=np.int64)
        for n in range(rows):
            for i in range(min(D, n) + 1):
                for j in range(q + 1):
                    M[n, _column(q, i, j)] = _falling(n - i, j) % p * vals[n - i + j] % p
        return M

    def unpack(vec):
        return [[Fraction(vec[_column(q, i, j)]) for i in range(D + 1)] for j in range(q + 1)]

    def verify(vec):
        polys = unpack(vec)
        if not any(polys[q]):
            return False
        return LinearOdeFit(q, D, polys, True, rows).residual(F).passed

    vec, info = multimodular_kernel_vector(build, verify, max_primes=max_primes)
    if vec is None:
        raise NotFound("no linear ODE of order %d with degree %d fits %d equations exactly"
                       % (q, D, rows), [info])
    polys = unpack(vec)
    # sign convention: lowest nonzero head coefficient positive
    if next(a for a in polys[q] if a) < 0:
        polys = [[-a for a in p] for p in polys]
    for p in polys:
        while len(p) > 1 and p[-1] == 0:
            p.pop()
    info.update(unknowns=U, equations=rows)
    return LinearOdeFit(q, D, polys, True, rows, 1, info)


def _mp_kernel(A, cols):
    """One kernel vector of the rows A (lists of mpf) by complete pivoting."""
    A = [list(r) for r in A]
    nr = len(A)
    perm = list(range(cols))
    rank = 0
    for k in range(min(nr, cols)):
        best, bv = None, 0
        for i in range(k, nr):
            row = A[i]
            for j in range(k, cols):
                v = abs(row[j])
                if v > bv:
                    bv, best = v, (i, j)
        if best is None or bv == 0:
            break
        i, j = best
        A[k], A[i] = A[i], A[k]
        if j != k:
            for row in A:
                row[k], row[j] = row[j], row[k]
            perm[k], perm[j] = perm[j], perm[k]
        piv = A[k][k]
        rk = A[k]
        for i in range(k + 1, nr):
            f = A[i][k] / piv
            if f:
                ri = A[i]
                for j in range(k, cols):
                    ri[j] -= f * rk[j]
        rank += 1
    x = [mp.mpf(0)] * cols
    x[rank] = mp.mpf(1)
    for k in range(rank - 1, -1, -1):
        s = mp.fsum(A[k][j] * x[j] for j in range(k + 1, cols))
        x[k] = -s / A[k][k]
    out = [mp.mpf(0)] * cols
    for k in range(cols):
        out[perm[k]] = x[k]
    return out


def _fit_approx(c, q, D, rows, scale, dps):
    U = (q + 1) * (D + 1)
    with mp.workdps(dps):
        if scale is None:
            try:
                est = radius_estimate_from_list(c)
                scale = float(mp.mpf(1) / est.growth)
            except (InsufficientTerms, ValueError):
                scale = 1.0
        s = mp.mpf(scale)
        ct = [_mpf(v) * s ** n for n, v in enumerate(c[:rows + q])]
        A = []
        for n in range(rows):
            row = [mp.mpf(0)] * U
            for i in range(min(D, n) + 1):
                for j in range(q + 1):
                    row[_column(q, i, j)] = _falling(n - i, j) * ct[n - i + j]
            A.append(row)
        vec = _mp_kernel(A, U)
        # back to the x variable: A_j(x) = s^j * At_j(x / s)
        polys = [[vec[_column(q, i, j)] * s ** (j - i) for i in range(D + 1)] for j in range(q + 1)]
    return LinearOdeFit(q, D, polys, False, rows, scale, {"unknowns": U, "equations": rows, "dps": dps})


# ---------------------------------------------------------------- singularities

@dataclass
class Singularity:
    location: complex
    exponent: complex
    kind: str = "regular"          # or "irregular-cluster"
    stable: bool = False            # confirmed by a neighbouring approximant


@dataclass
class SingularityReport:
    entries: list
    dominant: object = None
    info: dict = field(default_factory=dict)

    def near(self, x0, tol):
        return [e for e in self.entries if abs(e.location - x0) <= tol]

    def rows(self):
        """(location, exponent, kind) triples, e.g. for CSV export."""
        return [(e.location, e.exponent, e.kind) for e in self.entries]

    def __str__(self):
        lines = []
        for e in self.entries:
            tag = " *" if e is self.dominant else ""
            lines.append("%-40s exponent %-30s %s%s" % (
                _cstr(e.location), _cstr(e.exponent), e.kind, tag))
        return "\n".join(lines)


def _cstr(z, digits=12):
    z = complex(z)
    if abs(z.imag) <= 1e-14 * max(1.0, abs(z.real)):
        return "%.*g" % (digits, z.real)
    return "%.*g%+.*gj" % (digits, z.real, digits, z.imag)


def head_roots(fit):
    """Roots of the head polynomial via companion-matrix eigenvalues (double precision)."""
    if fit.exact:
        head = [float(a) for a in fit.head]
        s = 1.0
    else:
        head = [float(a) for a in fit.scaled_polys()[fit.order]]
        s = float(fit.scale)
    while head and head[-1] == 0:
        head.pop()
    if len(head) < 2:
        return []
    roots = np.roots(head[::-1])
    return [complex(r) * s for r in roots]


def _polyval(p, z):
    acc = 0
    for a in reversed(p):
        acc = acc * z + a
    return acc


def indicial_exponent(fit, x0):
    """Non-trivial local exponent at a simple root x0 of the head polynomial.

    At a regular singular point the exponents are 0, 1, ..., q-2 and
    q - 1 - A_{q-1}(x0) / A_q'(x0).
    """
    q = fit.order
    with mp.workdps(30):
        z = mp.mpc(x0)
        head = [_mpf(a) if fit.exact else a for a in fit.head]
        dhead = [i * a for i, a in enumerate(head)][1:]
        sub = [_mpf(a) if fit.exact else a for a in fit.polys[q - 1]] if q >= 1 else [0]
        d = _polyval(dhead, z)
        if d == 0:
            return complex("nan")
        return complex(q - 1 - _polyval(sub, z) / d)


def _clusters(pool, rel):
    """Indices of pool entries with >= 2 other entries within relative distance rel."""
    out = set()
    for i, (z, _) in enumerate(pool):
        near = [k for k, (w, _) in enumerate(pool) if abs(w - z) <= rel * max(abs(z), 1e-300)]
        if len(near) >= 3:
            out.add(i)
    return out


def singularities(fit, neighbours=(), stable_tol=1e-6, cluster_tol=1e-3):
    """Head-polynomial roots of `fit` with exponents and classification hints.

    neighbours are approximants of the adjacent orders. A root is `stable`
    when some neighbour has a root within relative distance stable_tol.
    It is flagged irregular-cluster when, together with one neighbour,
    at least three roots lie within relative distance cluster_tol of it.
    The dominant entry is the smallest stable nonzero root (the smallest
    nonzero root when no neighbours are given).
    """
    roots = head_roots(fit)
    other = [head_roots(nb) for nb in neighbours]
    irregular = set()
    for rs in other:
        pool = [(z, 0) for z in roots] + [(w, 1) for w in rs]
        for i in _clusters(pool, cluster_tol):
            if i < len(roots):
                irregular.add(i)
    entries = []
    for i, z in enumerate(roots):
        stable = any(abs(w - z) <= stable_tol * abs(z) for rs in other for w in rs)
        kind = "irregular-cluster" if i in irregular else "regular"
        entries.append(Singularity(z, indicial_exponent(fit, z), kind, stable))
    entries.sort(key=lambda e: (abs(e.location), e.location.imag))
    nonzero = [e for e in entries if abs(e.location) > 1e-12]
    pick = [e for e in nonzero if e.stable] if neighbours else nonzero
    dom = pick[0] if pick else None
    return SingularityReport(entries, dom, {"order": fit.order, "degree": fit.degree,
                                            "neighbours": len(other)})


def diff_pade_scan(F, specs, scale=None, dps=DEFAULT_DPS):
    """Approximants for each (order, degree) in specs; one report per fit,
    each judged against the fits adjacent to it in the list."""
    fits = [fit_linear_ode(F, q, D, exact=False, scale=scale, dps=dps) for q, D in specs]
    reports = []
    for k, fit in enumerate(fits):
        nbs = [fits[j] for j in (k - 1, k + 1) if 0 <= j < len(fits)]
        reports.append(singularities(fit, nbs))
    return fits, reports


# ---------------------------------------------------------------- growth rates

@dataclass
class RadiusEstimate:
    growth: object            # lambda, mpf
    radius: object            # 1 / lambda
    spread: object            # disagreement between the two best extrapolations
    method: str
    sign_pattern: str
    tail: list                # the raw ratio (or log) sequence tail

    def __float__(self):
        return float(self.growth)


def _sign_pattern(c):
    signs = [(1 if v > 0 else -1) for v in c if v]
    tail = signs[len(signs) // 2:]
    if all(s == tail[0] for s in tail):
        return "constant"
    if all(tail[i] == -tail[i + 1] for i in range(len(tail) - 1)):
        return "alternating"
    return "mixed"


def _richardson(seq, n0, K):
    """Richardson extrapolation of order K in 1/n using seq[n0 .. n0+K]."""
    total = mp.mpf(0)
    for j in range(K + 1):
        n = n0 + j
        total += seq[n] * mp.mpf(n) ** K * (-1) ** (K - j) / (mp.factorial(j) * mp.factorial(K - j))
    return total


def radius_estimate_from_list(c, method="ratio", K_max=8, dps=DEFAULT_DPS):
    c = [Fraction(v) for v in c]
    if sum(1 for v in c if v) < 50:
        raise InsufficientTerms(50, sum(1 for v in c if v), "radius estimate (nonzero terms)")
    pattern = _sign_pattern(c)
    with mp.workdps(dps):
        a = [abs(_mpf(v)) for v in c]
        N = len(a) - 1
        if method == "ratio":
            if any(v == 0 for v in a[N // 2:]):
                raise ValueError("ratio method needs nonzero tail coefficients; use method='root'")
            r = {n: a[n] / a[n - 1] for n in range(N // 2, N + 1)}
            cands = []
            for K in range(1, K_max + 1):
                n0 = N - K
                cands.append((K, _richardson(r, n0, K), _richardson(r, n0 - 1, K)))
            # the order whose value is most stable under a one-step shift
            K, best, prev = min(cands, key=lambda t: abs(t[1] - t[2]))
            spread = abs(best - prev)
            tail = [r[n] for n in range(N - 9, N + 1)]
            growth = best
        elif method == "root":
            # least squares log|c_n| = n log(lam) + alpha log n + beta + gamma / n on the tail
            pts = [n for n in range(N // 2, N + 1) if a[n]]
            X = mp.matrix([[n, mp.log(n), 1, mp.mpf(1) / n] for n in pts])
            y = mp.matrix([mp.log(a[n]) for n in pts])
            sol, res = mp.qr_solve(X, y)
            growth = mp.exp(sol[0])
            half = [n for n in pts if n >= (N * 3) // 4]
            X2 = mp.matrix([[n, mp.log(n), 1, mp.mpf(1) / n] for n in half])
            sol2, _ = mp.qr_solve(X2, mp.matrix([mp.log(a[n]) for n in half]))
            spread = abs(mp.exp(sol2[0]) - growth)
            tail = [mp.log(a[n]) / n for n in pts[-10:]]
        else:
            raise ValueError("method must be 'ratio' or 'root'")
        if not mp.isfinite(growth) or growth <= 0:
            raise ValueError("ratio sequence does not converge; tail: %s" % [mp.nstr(t, 10) for t in tail])
        return RadiusEstimate(growth, 1 / growth, spread, method, pattern, tail)


def radius_estimate(F, method="ratio", K_max=8, dps=DEFAULT_DPS):
    """Growth rate lambda (|c_n| ~ lambda^n) and radius 1/lambda of F.

    ratio: Richardson extrapolation of |c_n / c_{n-1}| in powers of 1/n.
    root: least-squares fit of log|c_n| against n, log n, 1, 1/n.
    Sign patterns are reported; only |c_n| enters.
    """
    return radius_estimate_from_list(_exact_coeffs(F), method, K_max, dps)


def transcendental_critical_point(h=None, lo=0.0, hi=0.0625, tol=1e-13, dps=30):
    """Smallest positive root of 16 x h(16 x) = 1, h = 2F1([1/2,1/2],[1],.) by default.

    Bisection on [lo, hi] followed by a secant polish; the hypergeometric
    function comes from mpmath.
    """
    with mp.workdps(dps):
        if h is None:
            def h(z):
                return mp.hyp2f1(0.5, 0.5, 1, z)

        def g(x):
            return 16 * x * h(16 * x) - 1

        a, b = mp.mpf(lo), mp.mpf(hi)
        ga, gb = g(a), g(b)
        if gb == 0:
            return float(b)
        if not mp.isfinite(gb):
            b = b * (1 - mp.mpf(10) ** -12)
            gb = g(b)
        if ga * gb > 0:
            raise ValueError("16 x h(16x) - 1 does not change sign on [%s, %s]" % (lo, hi))
        while b - a > mp.mpf(10) ** -8:
            m = (a + b) / 2
            gm = g(m)
            if (gm > 0) == (gb > 0):
                b, gb = m, gm
            else:
                a, ga = m, gm
        x = mp.findroot(g, (a, b), solver="secant", tol=mp.mpf(tol) ** 2)
        return float(x)


# ---------------------------------------------------------------- Borel fits

def borel_asymptotics(F, N_used=None, K=6, samples=(0.5, 0.8, 0.9, 0.99), dps=DEFAULT_DPS):
    """Fit c_n / n! = c + a_1/n + ... + a_K/n^K on the upper half of the terms.

    Returns (c, report); report holds the a_k, the fit residual and, at each
    sample point, the Borel sum next to the pole-plus-log model
    c/(1-x) - a_1 ln(1-x). The model carries only the singular part, so the
    remainder (sum minus model) is not small but must level off as x -> 1.
    """
    coeffs = _exact_coeffs(F)
    N = len(coeffs) - 1 if N_used is None else N_used
    if N > len(coeffs) - 1:
        raise InsufficientTerms(N + 1, len(coeffs), "Borel fit")
    with mp.workdps(dps):
        b = []
        fact = mp.mpf(1)
        for n in range(N + 1):
            if n:
                fact *= n
            b.append(_mpf(coeffs[n]) / fact)
        pts = list(range(max(1, N // 2), N + 1))
        X = mp.matrix([[mp.mpf(1) / mp.mpf(n) ** k for k in range(K + 1)] for n in pts])
        y = mp.matrix([b[n] for n in pts])
        sol, res = mp.qr_solve(X, y)
        c = sol[0]
        a = [sol[k] for k in range(1, K + 1)]
        model = []
        for x in samples:
            x = mp.mpf(x)
            s = mp.fsum(b[n] * x ** n for n in range(N + 1))
            m = c / (1 - x) - a[0] * mp.log(1 - x)
            model.append({"x": float(x), "borel_sum": float(s), "model": float(m),
                          "remainder": float(s - m)})
        report = {"c": float(c), "a": [float(v) for v in a], "fit_residual": float(res),
                  "terms": N + 1, "fit_window": (pts[0], pts[-1]), "model_check": model}
        return float(c), report
