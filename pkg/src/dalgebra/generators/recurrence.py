"""Convolution-type quadratic recurrences.

A RecurrenceSpec describes

    lead(n) * h[n+t] = sum_s  c_s(n) * h[n+s]                       (s < t)
                     + sum_terms  sum_{i=ilo}^{n-jlo} w(i, n) * h[i+a] * h[n-i+b]

for n = n0, n0+1, ... where n0 + t is the number of initial terms.

The convolution sums are evaluated online by divide and conquer over n: the
contribution of a block of already known terms to a block of future sums is
one big polynomial product, so the total cost is O(M(N) log N) instead of
the O(N^2) big-number multiplications of the direct loop.
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from ..domain import QQ
from ..errors import FormatError, RecurrenceError
from ..mult import mul_exact
from ..polyexpr import parse_poly, parse_value
from ..series import PowerSeries

DIRECT_LIMIT = 256
BASE_BLOCK = 32


@dataclass
class LinearTerm:
    coeff: str
    shift: int


@dataclass
class ConvTerm:
    weight: str
    a: int
    b: int
    ilo: int = 0
    jlo: int = 0


@dataclass
class RecurrenceSpec:
    name: str
    initial_terms: List[Fraction]
    target: int
    leading: str
    linear: List[LinearTerm] = field(default_factory=list)
    convolution: List[ConvTerm] = field(default_factory=list)
    parameters: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def start(self):
        return len(self.initial_terms) - self.target

    def validate(self):
        t = self.target
        if t < 1:
            raise FormatError("target shift must be >= 1")
        if self.start < 0:
            raise FormatError("need at least %d initial terms" % t)
        for lt in self.linear:
            if lt.shift >= t:
                raise FormatError("linear term h[n+%d] is not yet known when computing h[n+%d]" % (lt.shift, t))
            if lt.shift + self.start < 0:
                raise FormatError("linear term reads a negative index")
        for ct in self.convolution:
            if ct.ilo < 0 or ct.jlo < 0:
                raise FormatError("summation bounds must be non-negative")
            if ct.a - ct.jlo >= t or ct.b - ct.ilo >= t:
                raise FormatError("convolution reads terms not yet computed")
            if ct.ilo + ct.a < 0 or ct.jlo + ct.b < 0:
                raise FormatError("convolution reads a negative index")

    @classmethod
    def from_dict(cls, d):
        try:
            params = {k: parse_value(v) for k, v in d.get("parameters", {}).items()}
            spec = cls(
                name=d.get("name", "recurrence"),
                initial_terms=[parse_value(v) for v in d["initial_terms"]],
                target=int(d["target"]),
                leading=str(d.get("leading", "1")),
                linear=[LinearTerm(str(x["coeff"]), int(x["shift"])) for x in d.get("linear", [])],
                convolution=[ConvTerm(str(x["weight"]), int(x["a"]), int(x["b"]),
                                      int(x.get("ilo", 0)), int(x.get("jlo", 0)))
                             for x in d.get("convolution", [])],
                parameters=params,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError("bad recurrence spec: %s" % exc)
        spec.validate()
        return spec

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            try:
                d = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(str(exc), path, exc.lineno)
        return cls.from_dict(d)

    def to_dict(self):
        return {
            "name": self.name,
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "initial_terms": [str(v) for v in self.initial_terms],
            "target": self.target,
            "leading": self.leading,
            "linear": [{"coeff": x.coeff, "shift": x.shift} for x in self.linear],
            "convolution": [{"weight": x.weight, "a": x.a, "b": x.b, "ilo": x.ilo, "jlo": x.jlo}
                            for x in self.convolution],
        }


def _normalize(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _npoly(poly):
    """{(k,): c} -> callable n -> exact value."""
    items = [(e[0], c) for e, c in poly.items()]

    def f(n):
        return _normalize(sum((c * n ** e for e, c in items), Fraction(0)))
    return f


class _Product:
    """One online product sum_{i+j=n} (i^e A_i) * B_j with fixed weight column."""

    def __init__(self, term, e, wpoly, size):
        self.a, self.b, self.ilo, self.jlo, self.e = term.a, term.b, term.ilo, term.jlo, e
        self.w = wpoly
        self.A = [0 if i < term.ilo else None for i in range(size)]
        self.B = [0 if j < term.jlo else None for j in range(size)]
        self.acc = [0] * size

    def learn(self, k, v):
        i = k - self.a
        if 0 <= i < len(self.A) and i >= self.ilo:
            self.A[i] = v * i ** self.e if self.e else v
        j = k - self.b
        if 0 <= j < len(self.B) and j >= self.jlo:
            self.B[j] = v

    def direct(self, n, low):
        """Pairs of sum n with an index >= low (all pairs when low == 0)."""
        A, B = self.A, self.B
        s = 0
        if low == 0:
            for i in range(self.ilo, n - self.jlo + 1):
                s += A[i] * B[n - i]
            return s
        for i in range(max(low, self.ilo), n - self.jlo + 1):
            s += A[i] * B[n - i]
        for j in range(max(low, self.jlo), n - self.ilo + 1):
            s += A[n - j] * B[j]
        return s

    def block(self, l, mid, r):
        acc = self.acc
        if l == 0:
            prod = mul_exact(self.A[0:mid], self.B[0:mid], r)
            for m in range(mid, r):
                acc[m] += prod[m]
            return
        n = r - l
        p1 = mul_exact(self.A[l:mid], self.B[0:n], n)
        p2 = mul_exact(self.A[0:n], self.B[l:mid], n)
        for m in range(mid, r):
            acc[m] += p1[m - l] + p2[m - l]


def convolution_series(spec, N, method=None):
    """Generate h_0..h_N as an ExactRational PowerSeries.

    method: None (automatic), "direct" or "online".
    """
    spec.validate()
    t = spec.target
    params = spec.parameters
    init = [_normalize(Fraction(v)) for v in spec.initial_terms]
    if N < len(init):
        return PowerSeries(QQ, init[:N + 1], N)
    lead = _npoly(parse_poly(spec.leading, ("n",), params))
    lins = [(_npoly(parse_poly(x.coeff, ("n",), params)), x.shift) for x in spec.linear]
    steps = N - t + 1
    prods = []
    for ct in spec.convolution:
        w = parse_poly(ct.weight, ("i", "n"), params)
        by_e = {}
        for (ei, en), c in w.items():
            by_e.setdefault(ei, {})[(en,)] = c
        # online products need every index < mid known inside blocks
        for e, col in sorted(by_e.items()):
            prods.append(_Product(ct, e, _npoly(col), steps))
    h = init + [None] * (N + 1 - len(init))
    for k, v in enumerate(init):
        for P in prods:
            P.learn(k, v)
    n0 = spec.start

    def leaf(n, extras):
        if n < n0:
            return
        total = 0
        for f, s in lins:
            c = f(n)
            if c:
                total += c * h[n + s]
        for P, ex in zip(prods, extras):
            c = P.w(n)
            if c:
                total += c * (P.acc[n] + ex)
        d = lead(n)
        if not d:
            raise RecurrenceError("leading factor vanishes at n = %d" % n, n)
        v = _normalize(Fraction(total) / d) if isinstance(total, Fraction) or isinstance(d, Fraction) \
            or total % d else total // d
        h[n + t] = v
        for P in prods:
            P.learn(n + t, v)

    def base(l, r):
        for n in range(l, r):
            leaf(n, [P.direct(n, l) if n >= n0 else 0 for P in prods])

    online = all(ct.a <= t and ct.b <= t for ct in spec.convolution)
    if method is None:
        method = "online" if online and steps > DIRECT_LIMIT else "direct"
    if method == "online" and not online:
        raise RecurrenceError("online evaluation needs a, b <= target shift")

    if method == "direct" or not prods:
        base(0, steps)
    else:
        def solve(l, r):
            if r - l <= BASE_BLOCK:
                base(l, r)
                return
            mid = (l + r + 1) // 2
            solve(l, mid)
            for P in prods:
                P.block(l, mid, r)
            solve(mid, r)
        solve(0, steps)
    return PowerSeries(QQ, h, N, _raw=False)
