"""Coefficient domains: exact integers, exact rationals, residues mod p^r."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainMismatch, NonPrimeModulus, NotUnit
from .ntheory import inv_mod, is_prime, prime_power

INTEGER = "ExactInteger"
RATIONAL = "ExactRational"
MODULAR = "Modular"


@dataclass(frozen=True)
class CoefficientDomain:
    kind: str
    p: Optional[int] = None
    r: Optional[int] = None

    def __post_init__(self):
        if self.kind == MODULAR:
            if self.p is None or self.r is None or self.r < 1 or not is_prime(self.p):
                raise NonPrimeModulus("modulus must be p^r with p prime, r >= 1")
        elif self.kind in (INTEGER, RATIONAL):
            if self.p is not None or self.r is not None:
                raise ValueError("exact domains carry no modulus")
        else:
            raise ValueError("unknown domain kind %r" % (self.kind,))

    @property
    def modulus(self):
        """p**r for modular domains, 0 for the exact ones."""
        return self.p ** self.r if self.kind == MODULAR else 0

    @property
    def is_modular(self):
        return self.kind == MODULAR

    @property
    def is_field(self):
        return self.kind == RATIONAL or (self.kind == MODULAR and self.r == 1)

    def convert(self, c):
        """Coerce a scalar into canonical form for this domain."""
        if self.kind == MODULAR:
            m = self.modulus
            if isinstance(c, Fraction):
                if c.denominator % self.p == 0:
                    raise NotUnit("denominator %d divisible by %d" % (c.denominator, self.p))
                return c.numerator * inv_mod(c.denominator, m) % m
            return int(c) % m
        if self.kind == RATIONAL:
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise DomainMismatch("%s is not an integer" % c)
            return c.numerator
        if isinstance(c, float):
            raise DomainMismatch("floats are not exact coefficients")
        return int(c)

    def is_unit(self, c):
        if self.kind == MODULAR:
            return c % self.p != 0
        if self.kind == RATIONAL:
            return c != 0
        return c in (1, -1)

    def inverse(self, c):
        if not self.is_unit(c):
            raise NotUnit("%s is not a unit in %s" % (c, self))
        if self.kind == MODULAR:
            return inv_mod(c, self.modulus)
        if self.kind == RATIONAL:
            return 1 / Fraction(c)
        return c

    def __str__(self):
        if self.kind == MODULAR:
            return "Z/%d^%d" % (self.p, self.r) if self.r > 1 else "GF(%d)" % self.p
        return "ZZ" if self.kind == INTEGER else "QQ"


ZZ = CoefficientDomain(INTEGER)
QQ = CoefficientDomain(RATIONAL)


def Zmod(p, r=1):
    return CoefficientDomain(MODULAR, p, r)


def from_modulus(m):
    """Domain for a modulus header value: 0 means exact integers."""
    if m == 0:
        return ZZ
    pr = prime_power(m)
    if pr is None:
        raise NonPrimeModulus("%d is not a prime power" % m)
    return Zmod(*pr)
