"""Generalized hypergeometric series pFq by term-ratio recursion."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from ..domain import QQ
from ..polyexpr import parse_value
from ..series import PowerSeries


@dataclass
class HypergeometricSpec:
    upper: List[Fraction]
    lower: List[Fraction]
    scale: Fraction = Fraction(1)
    power: int = 1

    def __post_init__(self):
        self.upper = [parse_value(v) for v in self.upper]
        self.lower = [parse_value(v) for v in self.lower]
        self.scale = parse_value(self.scale)
        if self.power not in (1, 2):
            raise ValueError("argument power must be 1 or 2")
        for b in self.lower:
            if b.denominator == 1 and b <= 0:
                raise ValueError("lower parameter %s is a non-positive integer" % b)


def hypergeometric_series(spec, N):
    """sum_n (a)_n/(b)_n * (s x^power)^n / n! through x^N, exact."""
    coeffs = [Fraction(0)] * (N + 1)
    term = Fraction(1)
    n = 0
    while n * spec.power <= N:
        coeffs[n * spec.power] = term
        num = spec.scale
        for a in spec.upper:
            num *= a + n
        den = Fraction(n + 1)
        for b in spec.lower:
            den *= b + n
        term = term * num / den
        n += 1
        if term == 0:
            break
    return PowerSeries(QQ, coeffs, N, _raw=True)


def hyp2f1(a, b, c, scale, N, power=1):
    return hypergeometric_series(HypergeometricSpec([a, b], [c], scale, power), N)
