"""Found algebraic differential equations and their evaluation on series."""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ..domain import MODULAR
from ..errors import DomainMismatch
from ..report import ResidualReport
from ..series import PowerSeries, derivative
from .forms import AdeForm, functional_terms, term_name


def derivative_stack(F, k):
    """[F, F', ..., F^(k)], all truncated to order(F) - k."""
    out = [F]
    for _ in range(k):
        out.append(derivative(out[-1]))
    n = F.order - k
    return [s.truncate(n) for s in out]


def term_series(F, terms, k):
    """Series of every functional term (exponent tuple over F..F^(k)).

    Products are built incrementally: each term is a shorter term times one
    derivative, so a dense list of R terms costs about R multiplications.
    """
    derivs = derivative_stack(F, k)
    n = derivs[0].order
    one = PowerSeries(F.domain, [1], n)
    memo = {(0,) * (k + 1): one}

    def get(c):
        if c in memo:
            return memo[c]
        j = max(i for i, e in enumerate(c) if e)
        parent = c[:j] + (c[j] - 1,) + c[j + 1:]
        s = get(parent) * derivs[j]
        memo[c] = s
        return s

    return [get(tuple(c)) for c in terms]


def _poly_times_series(poly, s, out, m):
    """out += poly(x) * s (in place, lists), modulo m when m > 0."""
    n = len(out)
    for j, a in enumerate(poly):
        if not a:
            continue
        for e in range(j, n):
            out[e] += a * s[e - j]
    if m:
        for e in range(n):
            out[e] %= m


@dataclass(frozen=True)
class AdeRelation:
    """sum_i p_i(x) * term_i(F, F', ..., F^(k)) = 0.

    polys[i] lists the coefficients of p_i by ascending x-degree and pairs with
    form.terms[i]. modulus 0 means integer coefficients (content 1, first
    nonzero coefficient positive); otherwise residues mod a prime.
    """

    form: AdeForm
    polys: tuple
    modulus: int = 0
    info: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def terms(self):
        return functional_terms(self.form)

    @classmethod
    def from_vector(cls, form, vec, modulus=0, info=None):
        w = form.d + 1
        R = form.R
        if len(vec) != R * w:
            raise ValueError("vector length %d, expected %d" % (len(vec), R * w))
        polys = tuple(tuple(int(v) for v in vec[i * w:(i + 1) * w]) for i in range(R))
        return cls(form, polys, modulus, info or {})

    @classmethod
    def from_terms(cls, form, mapping, modulus=0):
        """Build from {exponent tuple: [coefficients by x-degree]}."""
        terms = functional_terms(form)
        index = {t: i for i, t in enumerate(terms)}
        polys = [[0] * (form.d + 1) for _ in terms]
        for t, coeffs in mapping.items():
            t = tuple(t)
            if t not in index:
                raise ValueError("term %s is not part of form %s" % (t, form))
            if len(coeffs) > form.d + 1:
                raise ValueError("coefficient of %s exceeds degree %d" % (term_name(t), form.d))
            for j, c in enumerate(coeffs):
                polys[index[t]][j] = c % modulus if modulus else c
        return cls(form, tuple(tuple(p) for p in polys), modulus)

    def vector(self):
        return [c for p in self.polys for c in p]

    def nonzero_terms(self):
        return [(t, p) for t, p in zip(self.terms, self.polys) if any(p)]

    def as_dict(self):
        return {t: list(p) for t, p in self.nonzero_terms()}

    def reduce(self, p):
        """Coefficients mod p, rescaled so the last nonzero entry is 1."""
        if self.modulus and self.modulus != p:
            raise DomainMismatch("relation is already modulo %d" % self.modulus)
        vec = [c % p for c in self.vector()]
        return AdeRelation.from_vector(self.form, _monic_last(vec, p), p)

    def same_up_to_unit(self, other):
        """Equal as relations up to a nonzero scalar; forms may differ in size."""
        if self.modulus != other.modulus:
            return False
        return _canonical(self.as_dict(), self.modulus) == _canonical(other.as_dict(), other.modulus)

    def max_x_degree(self):
        return max((len(p) - 1 - next(i for i, c in enumerate(reversed(p)) if c)
                    for _, p in self.nonzero_terms()), default=-1)

    def pretty(self):
        parts = []
        for t, p in self.nonzero_terms():
            poly = _poly_str(p)
            name = term_name(t)
            if name == "1":
                parts.append("(%s)" % poly)
            else:
                parts.append("(%s)*%s" % (poly, name))
        s = " + ".join(parts) if parts else "0"
        if self.modulus:
            s += "  (mod %d)" % self.modulus
        return s + " = 0"

    def to_dict(self):
        return {
            "form": [self.form.m, self.form.k, self.form.d, self.form.homogeneous],
            "modulus": self.modulus,
            "terms": [[list(t), list(p)] for t, p in self.nonzero_terms()],
        }

    @classmethod
    def from_dict(cls, d):
        m, k, deg, hom = d["form"]
        form = AdeForm(m, k, deg, bool(hom))
        return cls.from_terms(form, {tuple(t): p for t, p in d["terms"]}, d.get("modulus", 0))

    def __str__(self):
        return self.pretty()


def _poly_str(p):
    out = []
    for j, c in enumerate(p):
        if not c:
            continue
        mono = "" if j == 0 else ("x" if j == 1 else "x^%d" % j)
        if mono and c == 1:
            out.append(mono)
        elif mono and c == -1:
            out.append("-" + mono)
        else:
            out.append(str(c) + ("*" + mono if mono else ""))
    return " + ".join(out).replace("+ -", "- ") or "0"


def _monic_last(vec, p):
    vec = [int(c) % p for c in vec]
    for c in reversed(vec):
        if c:
            inv = pow(c, -1, p)
            return [v * inv % p for v in vec]
    return vec


def _canonical(d, m):
    """Trim trailing zeros, then fix the scalar by the first nonzero coefficient."""
    items = []
    for t in d:
        v = [c % m for c in d[t]] if m else list(d[t])
        while v and v[-1] == 0:
            v.pop()
        key = tuple(t)
        while key and key[-1] == 0:
            key = key[:-1]
        if v:
            items.append((key, v))
    items.sort()
    lead = next((c for _, v in items for c in v if c), None)
    if lead is None:
        return ()
    if m:
        inv = pow(lead, -1, m)
        return tuple((t, tuple(c * inv % m for c in v)) for t, v in items)
    g = 0
    for _, v in items:
        for c in v:
            g = gcd(g, c)
    g = g if lead > 0 else -g
    return tuple((t, tuple(c // g for c in v)) for t, v in items)


def residual_series(F, rel):
    """Coefficients of P(x, F, ..., F^(k)) through order(F) - k (a list)."""
    k = rel.form.k
    dom = F.domain
    m = dom.modulus
    if rel.modulus:
        if dom.kind != MODULAR or dom.p != rel.modulus:
            if dom.kind == MODULAR:
                raise DomainMismatch("relation mod %d applied to %s series" % (rel.modulus, dom))
            from ..series import reduce_mod
            F = reduce_mod(F, rel.modulus)
            dom = F.domain
            m = dom.modulus
    pairs = rel.nonzero_terms()
    n = F.order - k
    if n < 0:
        return []
    series = term_series(F, [t for t, _ in pairs], k)
    out = [0] * (n + 1)
    for (t, p), s in zip(pairs, series):
        _poly_times_series(p, s._c, out, 0)
    if m:
        out = [c % m for c in out]
    return out


def verify_ade(F, rel):
    """Substitute F into the relation; PASS or the first nonzero residual index."""
    if F.order < rel.form.k:
        return ResidualReport(False, -1, 0, "series shorter than the differential order")
    res = residual_series(F, rel)
    for i, c in enumerate(res):
        if c:
            return ResidualReport(False, len(res) - 1, i, c)
    return ResidualReport(True, len(res) - 1)


def relation_from_expression(text, k, params=None, form=None, modulus=0):
    """Parse "x^3 - x*y0 - y0^2 + x*y0*y1" (y_j stands for F^(j)) into a relation.

    Rational coefficients are cleared to integers. Without an explicit form the
    smallest dense (m, k, d) containing the expression is used.
    """
    from math import lcm
    from ..polyexpr import parse_poly
    names = ["x"] + ["y%d" % j for j in range(k + 1)]
    poly = parse_poly(text, names, params)
    den = 1
    for c in poly.values():
        den = lcm(den, Fraction(c).denominator)
    if form is None:
        m = max((sum(e[1:]) for e, c in poly.items() if c), default=1)
        d = max((e[0] for e, c in poly.items() if c), default=0)
        form = AdeForm(max(m, 1), k, d)
    mapping = {}
    for expo, c in poly.items():
        if not c:
            continue
        coeffs = mapping.setdefault(tuple(expo[1:]), [0] * (form.d + 1))
        if expo[0] > form.d:
            raise ValueError("x-degree %d exceeds form degree %d" % (expo[0], form.d))
        coeffs[expo[0]] += int(c * den)
    return AdeRelation.from_terms(form, mapping, modulus)
