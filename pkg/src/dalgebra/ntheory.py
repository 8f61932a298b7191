"""Small number theory helpers: primality, prime powers, modular roots."""
from fractions import Fraction
from math import gcd, isqrt

import gmpy2


def is_prime(n):
    return n >= 2 and bool(gmpy2.is_prime(n, 50))


def prime_power(m):
    """Return (p, r) with m = p**r, or None."""
    if m < 2:
        return None
    if is_prime(m):
        return m, 1
    for r in range(m.bit_length(), 1, -1):
        p = int(gmpy2.iroot(m, r)[0])
        if p ** r == m and is_prime(p):
            return p, r
    return None


def inv_mod(a, m):
    a %= m
    if gcd(a, m) != 1:
        raise ZeroDivisionError("%d is not invertible mod %d" % (a, m))
    return pow(a, -1, m)


def sqrt_mod_prime(a, p):
    """Tonelli-Shanks; returns the smaller root or None if a is not a square."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def sqrt_mod_prime_power(a, p, r):
    """Square root of a unit a modulo p**r for odd p (Hensel lift)."""
    m = p ** r
    x = sqrt_mod_prime(a, p)
    if x is None or x == 0:
        return None
    pk = p
    while pk < m:
        pk = min(pk * pk, m)
        x = (x + a * inv_mod(x, pk)) * inv_mod(2, pk) % pk
    x %= m
    return min(x, m - x)


def rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def rational_reconstruct(a, m):
    """Find n/d = a mod m with |n|, d <= sqrt(m/2), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1)
