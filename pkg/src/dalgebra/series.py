"""Exact truncated power series.

A PowerSeries knows its coefficients c_0..c_N and nothing beyond: asking for
c_n with n > N raises TruncationError. Every operation returns the largest
order through which its result is provably correct.
"""
from fractions import Fraction
from math import factorial

from .domain import INTEGER, MODULAR, QQ, RATIONAL, ZZ, CoefficientDomain, Zmod
from .errors import DomainMismatch, NotSquare, NotUnit, TruncationError
from .mult import mul_int, mul_rational
from .ntheory import inv_mod, rational_sqrt, sqrt_mod_prime_power


def _mul_lists(dom, a, b, n, method=None):
    if dom.kind == RATIONAL:
        return mul_rational(a, b, n, method)
    return mul_int(a, b, n, dom.modulus, method)


class PowerSeries:
    """Immutable truncated series over a CoefficientDomain."""

    __slots__ = ("domain", "_c", "order")

    def __init__(self, domain, coeffs, order=None, _raw=False):
        if not isinstance(domain, CoefficientDomain):
            raise TypeError("domain must be a CoefficientDomain")
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        if len(coeffs) < order + 1:
            # short lists describe polynomials: the missing terms are zero
            coeffs = coeffs + [0] * (order + 1 - len(coeffs))
        coeffs = coeffs[:order + 1]
        if not _raw:
            coeffs = [domain.convert(c) for c in coeffs]
        self.domain = domain
        self._c = tuple(coeffs)
        self.order = order

    # construction helpers
    @classmethod
    def from_list(cls, coeffs, domain=ZZ, order=None):
        return cls(domain, coeffs, order)

    @classmethod
    def zero(cls, domain, order):
        return cls(domain, [], order)

    @classmethod
    def one(cls, domain, order):
        return cls(domain, [1], order)

    @classmethod
    def x(cls, domain, order):
        return cls(domain, [0, 1], order)

    def _new(self, coeffs, order):
        return PowerSeries(self.domain, coeffs, order, _raw=True)

    # read-only access
    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        return self.coeff(n)

    def coeff(self, n):
        if n < 0:
            return self.domain.convert(0)
        if n > self.order:
            raise TruncationError("coefficient %d requested, series known through %d" % (n, self.order))
        return self._c[n]

    @property
    def coeffs(self):
        return list(self._c)

    def __len__(self):
        return self.order + 1

    def __iter__(self):
        return iter(self._c)

    def valuation(self):
        """Index of the first nonzero coefficient, or None if zero through order."""
        for i, c in enumerate(self._c):
            if c:
                return i
        return None

    def is_zero(self):
        return self.valuation() is None

    def view(self):
        return SeriesView(self)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.domain == other.domain and self.order == other.order and self._c == other._c

    def __hash__(self):
        return hash((self.domain, self.order, self._c))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self._c[:8])
        more = ", ..." if self.order >= 8 else ""
        return "PowerSeries(%s, [%s%s], order=%d)" % (self.domain, shown, more, self.order)

    # conversions
    def truncate(self, order):
        if order > self.order:
            raise TruncationError("cannot extend order %d to %d" % (self.order, order))
        return self._new(self._c[:order + 1], order)

    def to_rational(self):
        if self.domain.kind == MODULAR:
            raise DomainMismatch("modular series cannot be lifted")
        return PowerSeries(QQ, [Fraction(c) for c in self._c], self.order, _raw=True)

    def to_integer(self):
        """ExactRational series with integral coefficients as ExactInteger."""
        if self.domain.kind == INTEGER:
            return self
        if self.domain.kind == MODULAR:
            raise DomainMismatch("modular series cannot be lifted")
        out = []
        for i, c in enumerate(self._c):
            if c.denominator != 1:
                raise DomainMismatch("coefficient %d = %s is not an integer" % (i, c))
            out.append(c.numerator)
        return PowerSeries(ZZ, out, self.order, _raw=True)

    def is_integral(self):
        if self.domain.kind == RATIONAL:
            return all(c.denominator == 1 for c in self._c)
        return True

    def _check(self, other):
        if not isinstance(other, PowerSeries):
            raise TypeError("expected a PowerSeries")
        if other.domain != self.domain:
            raise DomainMismatch("%s vs %s" % (self.domain, other.domain))

    # ring operations
    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            return self + self.constant(other)
        return linear_combine(self, other, 1, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, PowerSeries):
            return self - self.constant(other)
        return linear_combine(self, other, 1, -1)

    def __rsub__(self, other):
        return self.constant(other) - self

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = self.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def constant(self, c):
        return PowerSeries(self.domain, [c], self.order)

    def scale(self, alpha):
        alpha = self.domain.convert(alpha)
        m = self.domain.modulus
        if m:
            return self._new([alpha * c % m for c in self._c], self.order)
        return self._new([alpha * c for c in self._c], self.order)

    def shift(self, k):
        """Multiply by x^k (k >= 0) or divide by x^-k when the low terms vanish."""
        if k >= 0:
            zero = self.domain.convert(0)
            return self._new([zero] * k + list(self._c), self.order + k)
        k = -k
        if any(self._c[:k]):
            raise ValueError("series is not divisible by x^%d" % k)
        if k > self.order:
            raise TruncationError("nothing left after dividing by x^%d" % k)
        return self._new(self._c[k:], self.order - k)

    def substitute_power(self, s):
        """F(x^s); known through s*(order+1) - 1."""
        zero = self.domain.convert(0)
        out = [zero] * (s * self.order + 1)
        for i, c in enumerate(self._c):
            out[s * i] = c
        n = s * (self.order + 1) - 1
        return self._new(out + [zero] * (n + 1 - len(out)), n)

    def scale_argument(self, t):
        """F(t*x) for a scalar t."""
        t = self.domain.convert(t)
        m = self.domain.modulus
        out = []
        pw = self.domain.convert(1)
        for c in self._c:
            out.append(c * pw % m if m else c * pw)
            pw = pw * t % m if m else pw * t
        return self._new(out, self.order)

    def derivative(self):
        return derivative(self)

    def compose(self, inner):
        return compose(self, inner)

    def reciprocal(self):
        return reciprocal(self)

    def sqrt(self, root=None):
        return sqrt(self, root)

    def reduce_mod(self, modulus):
        return reduce_mod(self, modulus)

    def borel(self):
        return borel(self)

    def inverse_borel(self):
        return inverse_borel(self)


class SeriesView:
    """Read-only handle: coefficient access and valuation."""

    __slots__ = ("_s",)

    def __init__(self, s):
        self._s = s

    def __getitem__(self, n):
        return self._s.coeff(n)

    @property
    def order(self):
        return self._s.order

    @property
    def valuation(self):
        return self._s.valuation()


def linear_combine(a, b, alpha, beta):
    a._check(b)
    dom = a.domain
    alpha = dom.convert(alpha)
    beta = dom.convert(beta)
    n = min(a.order, b.order)
    m = dom.modulus
    if m:
        out = [(alpha * x + beta * y) % m for x, y in zip(a._c[:n + 1], b._c[:n + 1])]
    else:
        out = [alpha * x + beta * y for x, y in zip(a._c[:n + 1], b._c[:n + 1])]
    return PowerSeries(dom, out, n, _raw=True)


def multiply(a, b, method=None):
    """Cauchy product truncated to min(order(a), order(b)).

    method: None (automatic), "schoolbook" or "kronecker".
    """
    a._check(b)
    n = min(a.order, b.order)
    out = _mul_lists(a.domain, list(a._c), list(b._c), n + 1, method)
    return PowerSeries(a.domain, out, n, _raw=True)


def derivative(a):
    if a.order < 1:
        raise TruncationError("derivative of an order-0 series is unknown")
    m = a.domain.modulus
    out = [k * a._c[k] for k in range(1, a.order + 1)]
    if m:
        out = [c % m for c in out]
    return PowerSeries(a.domain, out, a.order - 1, _raw=True)


def compose(outer, inner):
    """outer(inner(x)); inner must have zero constant term.

    Paterson-Stockmeyer evaluation: about 2*sqrt(N) full products instead of N.
    """
    outer._check(inner)
    dom = outer.domain
    if inner._c[0]:
        raise ValueError("inner series has a nonzero constant term")
    v = inner.valuation()
    if v is None:
        return PowerSeries(dom, [outer._c[0]], inner.order)
    n = min(outer.order * v, inner.order)
    k_max = min(outer.order, n // v)  # u^k is O(x^(n+1)) beyond this
    a = list(outer._c[:k_max + 1])
    u = list(inner._c[:n + 1])
    m = dom.modulus
    N = n + 1

    def mul(x, y):
        return _mul_lists(dom, x, y, N)

    def axpy(acc, c, y):
        if not c:
            return
        if m:
            for i, yi in enumerate(y):
                if yi:
                    acc[i] = (acc[i] + c * yi) % m
        else:
            for i, yi in enumerate(y):
                if yi:
                    acc[i] += c * yi

    zero = dom.convert(0)
    one = dom.convert(1)
    s = max(1, int((k_max + 1) ** 0.5))
    powers = [[one] + [zero] * n]
    for _ in range(s):
        powers.append(mul(powers[-1], u))
    giant = powers[s]
    blocks = [a[i:i + s] for i in range(0, k_max + 1, s)]
    result = [zero] * N
    for block in reversed(blocks):
        if any(result):
            result = mul(result, giant)
        for j, c in enumerate(block):
            axpy(result, c, powers[j])
    if dom.kind == RATIONAL:
        result = [Fraction(c) for c in result]
    return PowerSeries(dom, result, n, _raw=True)


def reciprocal(a):
    dom = a.domain
    c0 = a._c[0]
    if not dom.is_unit(c0):
        raise NotUnit("constant term %s is not a unit in %s" % (c0, dom))
    N = a.order + 1
    inv0 = dom.inverse(c0)
    b = [inv0]
    prec = 1
    m = dom.modulus
    al = list(a._c)
    while prec < N:
        prec = min(2 * prec, N)
        # b <- b*(2 - a*b)
        ab = _mul_lists(dom, al[:prec], b, prec)
        e = [-c for c in ab]
        e[0] += 2
        b = _mul_lists(dom, b, e, prec)
        if m:
            b = [c % m for c in b]
    return PowerSeries(dom, b, a.order, _raw=True)


def _sqrt_constant(dom, c0, root):
    if dom.kind == MODULAR:
        if dom.p == 2:
            raise NotSquare("square roots modulo powers of 2 are not supported")
        if not dom.is_unit(c0):
            raise NotSquare("constant term %d is not a unit mod %d" % (c0, dom.p))
        r0 = sqrt_mod_prime_power(c0, dom.p, dom.r)
        if r0 is None:
            raise NotSquare("%d is not a square mod %d" % (c0, dom.modulus))
    else:
        r0 = rational_sqrt(c0)
        if r0 is None or r0 == 0:
            raise NotSquare("%s is not a nonzero rational square" % c0)
    if root is not None:
        root = dom.convert(root)
        m = dom.modulus
        sq = root * root % m if m else root * root
        if sq != c0:
            raise NotSquare("%s is not a square root of %s" % (root, c0))
        r0 = root
    return r0


def sqrt(a, root=None):
    """Series square root by Newton iteration.

    An input x^(2k)*g with g(0) != 0 gives x^k*sqrt(g), known through order - k.
    root picks the constant term of sqrt(g); default is the positive root
    (exact domains) or the smaller residue (modular).
    """
    dom = a.domain
    v = a.valuation()
    if v is None:
        return PowerSeries(dom, [], a.order // 2)
    if v % 2:
        raise NotSquare("odd valuation %d" % v)
    k = v // 2
    g = a.shift(-v)
    target = dom
    if dom.kind == INTEGER:
        target = QQ
        g = g.to_rational()
    c0 = g._c[0]
    r0 = _sqrt_constant(target, c0, root)
    N = g.order + 1
    gl = list(g._c)
    m = target.modulus
    half = target.inverse(target.convert(2))
    b = [r0]
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        # b <- (b + g/b)/2
        binv = reciprocal(PowerSeries(target, b + [0] * (prec - len(b)), prec - 1, _raw=True))
        q = _mul_lists(target, gl[:prec], list(binv._c), prec)
        bb = b + [target.convert(0)] * (prec - len(b))
        if m:
            b = [(x + y) * half % m for x, y in zip(bb, q)]
        else:
            b = [(x + y) * half for x, y in zip(bb, q)]
    res = PowerSeries(target, b, g.order, _raw=True)
    if dom.kind == INTEGER and res.is_integral():
        res = res.to_integer()
    return res.shift(k) if k else res


def reduce_mod(a, modulus):
    """Termwise residues modulo p^r (given as int p^r, a (p, r) pair, or a domain)."""
    if isinstance(modulus, CoefficientDomain):
        target = modulus
    elif isinstance(modulus, tuple):
        target = Zmod(*modulus)
    else:
        from .domain import from_modulus
        target = from_modulus(modulus)
    if not target.is_modular:
        raise ValueError("reduce_mod needs a prime power modulus")
    m = target.modulus
    dom = a.domain
    if dom.kind == MODULAR:
        if dom.p != target.p or dom.r < target.r:
            raise DomainMismatch("cannot reduce %s to %s" % (dom, target))
        return PowerSeries(target, [c % m for c in a._c], a.order, _raw=True)
    if dom.kind == INTEGER:
        return PowerSeries(target, [c % m for c in a._c], a.order, _raw=True)
    out = []
    for i, c in enumerate(a._c):
        if c.denominator % target.p == 0:
            raise NotUnit("coefficient %d = %s has denominator divisible by %d" % (i, c, target.p))
        out.append(c.numerator * inv_mod(c.denominator, m) % m)
    return PowerSeries(target, out, a.order, _raw=True)


def borel(a):
    """c_n -> c_n / n!."""
    dom = a.domain
    if dom.kind == MODULAR:
        if a.order >= dom.p:
            raise NotUnit("n! is not invertible mod %d for n >= %d" % (dom.p, dom.p))
        m = dom.modulus
        out = []
        f = 1
        for n, c in enumerate(a._c):
            if n:
                f = f * n % m
            out.append(c * inv_mod(f, m) % m)
        return PowerSeries(dom, out, a.order, _raw=True)
    out = []
    f = 1
    for n, c in enumerate(a._c):
        if n:
            f *= n
        out.append(Fraction(c, f) if dom.kind == INTEGER else c / f)
    return PowerSeries(QQ, out, a.order, _raw=True)


def inverse_borel(a):
    """c_n -> c_n * n!."""
    dom = a.domain
    m = dom.modulus
    out = []
    f = 1
    for n, c in enumerate(a._c):
        if n:
            f = f * n % m if m else f * n
        out.append(c * f % m if m else c * f)
    return PowerSeries(dom, out, a.order, _raw=True)


def factorial_series(order, domain=ZZ):
    """Sum n! x^n through the given order."""
    return PowerSeries(domain, [factorial(n) for n in range(order + 1)], order)
