"""Sparse bivariate polynomials P(x, y) encoding algebraic equations P(x, F(x)) = 0."""
import os
import tempfile
from math import gcd

from ..domain import from_modulus
from ..errors import FormatError
from ..polyexpr import parse_poly
from ..seriesio import format_modulus, parse_modulus


class BivariatePoly:
    """Immutable sum of c * x^a * y^b with nonzero canonical coefficients.

    modulus 0 means integer coefficients; otherwise residues mod p^r.
    """

    __slots__ = ("modulus", "_t")

    def __init__(self, terms, modulus=0):
        m = modulus
        clean = {}
        for (a, b), c in dict(terms).items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            c = int(c) % m if m else int(c)
            if c:
                clean[(int(a), int(b))] = c
        self.modulus = m
        self._t = clean

    @classmethod
    def from_expr(cls, text, modulus=0):
        """Parse text in x and y (F is accepted for y)."""
        text = str(text).replace("F(x)", "y").replace("F", "y")
        poly = parse_poly(text, ("x", "y"))
        terms = {}
        for (a, b), c in poly.items():
            if c.denominator != 1:
                if not modulus:
                    raise FormatError("non-integer coefficient %s" % c)
                c = c.numerator * pow(c.denominator, -1, modulus)
            terms[(a, b)] = int(c)
        return cls(terms, modulus)

    @classmethod
    def from_y_coeffs(cls, coeffs, modulus=0, powers=None):
        """From polynomials in x (lists by ascending degree) attached to y^b."""
        powers = range(len(coeffs)) if powers is None else powers
        terms = {}
        for b, q in zip(powers, coeffs):
            for a, c in enumerate(q):
                if c:
                    terms[(a, b)] = terms.get((a, b), 0) + c
        return cls(terms, modulus)

    @property
    def terms(self):
        return dict(self._t)

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.modulus == other.modulus and self._t == other._t

    def __hash__(self):
        return hash((self.modulus, tuple(sorted(self._t.items()))))

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    @property
    def deg_x(self):
        return max((a for a, _ in self._t), default=-1)

    @property
    def deg_y(self):
        return max((b for _, b in self._t), default=-1)

    @property
    def degrees(self):
        """(degree in y, degree in x), the order in which tables are quoted."""
        return self.deg_y, self.deg_x

    def y_coeff(self, b):
        """Coefficient of y^b as a list of x-coefficients."""
        out = [0] * (self.deg_x + 1)
        for (a, bb), c in self._t.items():
            if bb == b:
                out[a] = c
        while out and out[-1] == 0:
            out.pop()
        return out

    def leading(self):
        """Lex-leading monomial: highest y-degree, then highest x-degree."""
        if not self._t:
            return None
        return max(self._t, key=lambda ab: (ab[1], ab[0]))

    def normalized(self):
        """Content 1 and positive lead (exact) or lead 1 when it is a unit (residues)."""
        if not self._t:
            return self
        lead = self._t[self.leading()]
        m = self.modulus
        if m:
            try:
                inv = pow(lead, -1, m)
            except ValueError:
                return self
            return BivariatePoly({k: c * inv for k, c in self._t.items()}, m)
        g = 0
        for c in self._t.values():
            g = gcd(g, c)
        if lead < 0:
            g = -g
        return BivariatePoly({k: c // g for k, c in self._t.items()}, 0)

    def reduce(self, modulus):
        return BivariatePoly(self._t, modulus)

    def same_up_to_unit(self, other):
        return self.modulus == other.modulus and self.normalized() == other.normalized()

    def is_even_in_x(self):
        return all(a % 2 == 0 for a, _ in self._t)

    def evaluate(self, F):
        """Coefficients of P(x, F(x)) through order(F).

        Arithmetic is modulo the smaller of the two moduli (which must divide
        each other); an exact F is reduced modulo P's modulus first.
        """
        from ..series import PowerSeries, reduce_mod
        m = self.modulus
        fm = F.domain.modulus
        if m and fm and fm % m and m % fm:
            raise ValueError("moduli %d and %d are incompatible" % (m, fm))
        if m and (not fm or m < fm):
            F = reduce_mod(F, m)
        n = F.order
        acc = None
        for b in range(self.deg_y, -1, -1):
            q = PowerSeries(F.domain, self.y_coeff(b)[:n + 1], n)
            acc = q if acc is None else acc * F + q
        return acc.coeffs if acc is not None else [0] * (n + 1)

    def pretty(self):
        if not self._t:
            return "0"
        parts = []
        for b in range(self.deg_y, -1, -1):
            q = self.y_coeff(b)
            if not any(q):
                continue
            mons = []
            for a in range(len(q) - 1, -1, -1):
                c = q[a]
                if not c:
                    continue
                xm = "" if a == 0 else ("x" if a == 1 else "x^%d" % a)
                if xm and c == 1:
                    mons.append(xm)
                else:
                    mons.append(str(c) + ("*" + xm if xm else ""))
            poly = " + ".join(mons)
            ym = "" if b == 0 else ("F" if b == 1 else "F^%d" % b)
            if not ym:
                parts.append("(%s)" % poly)
            else:
                parts.append(ym if poly == "1" else "(%s)*%s" % (poly, ym))
        s = " + ".join(parts)
        if self.modulus:
            s += "  (mod %s)" % format_modulus(from_modulus(self.modulus))
        return s

    def __repr__(self):
        return "BivariatePoly(%s)" % self.pretty()

    __str__ = pretty


def write_poly(P, path):
    """`#modulus p^r` header, then one `c a b` line per monomial c*x^a*y^b."""
    lines = ["#modulus %s" % format_modulus(from_modulus(P.modulus))]
    for (a, b) in sorted(P.terms, key=lambda ab: (ab[1], ab[0])):
        lines.append("%d %d %d" % (P.terms[(a, b)], a, b))
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w") as f:
        f.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_poly(path):
    modulus = None
    terms = {}
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                key, _, val = s[1:].partition(" ")
                if key == "modulus":
                    modulus = parse_modulus(val.strip())
                continue
            parts = s.split()
            if len(parts) != 3:
                raise FormatError("expected 'c a b'", path, lineno)
            try:
                c, a, b = (int(t) for t in parts)
            except ValueError:
                raise FormatError("non-integer entry %r" % s, path, lineno)
            if a < 0 or b < 0:
                raise FormatError("negative exponent", path, lineno)
            terms[(a, b)] = terms.get((a, b), 0) + c
    if modulus is None:
        raise FormatError("missing #modulus header", path)
    return BivariatePoly(terms, modulus)
