"""Truncated polynomial multiplication kernels on coefficient lists.

Two independent routes are provided: a quadratic schoolbook product and a
Kronecker-substitution product that packs each operand into one big integer
and lets GMP do the (subquadratic) multiplication. Both are exact and must
agree bit for bit.
"""
from fractions import Fraction
from math import lcm

from gmpy2 import f_mod_2exp, mpz

KRONECKER_THRESHOLD = 24


def mul_schoolbook(a, b, n, mod=0):
    """First n coefficients of a*b by the quadratic algorithm."""
    a = a[:n]
    b = b[:n]
    out = [0] * n
    for i, ai in enumerate(a):
        if not ai:
            continue
        lim = n - i
        for j, bj in enumerate(b[:lim]):
            out[i + j] += ai * bj
    if mod:
        out = [c % mod for c in out]
    return out


def _pack(vals, w):
    """Pack signed integers into one mpz with slots of w bytes."""
    pos = []
    neg = []
    zero = bytes(w)
    any_neg = False
    for v in vals:
        if v >= 0:
            pos.append(int(v).to_bytes(w, "little"))
            neg.append(zero)
        else:
            any_neg = True
            pos.append(zero)
            neg.append(int(-v).to_bytes(w, "little"))
    big = mpz(int.from_bytes(b"".join(pos), "little"))
    if any_neg:
        big -= mpz(int.from_bytes(b"".join(neg), "little"))
    return big


def _unpack(big, w, count, signed):
    if signed:
        half = 1 << (8 * w - 1)
        pattern = bytes(w - 1) + b"\x80"
        big = big + mpz(int.from_bytes(pattern * count, "little"))
    else:
        half = 0
    big = f_mod_2exp(big, 8 * w * count)
    raw = int(big).to_bytes(w * count, "little")
    fb = int.from_bytes
    return [fb(raw[k * w:(k + 1) * w], "little") - half for k in range(count)]


def mul_kronecker(a, b, n, mod=0):
    """First n coefficients of a*b for integer lists via one big product."""
    a = a[:n]
    b = b[:n]
    while a and not a[-1]:
        a = a[:-1]
    while b and not b[-1]:
        b = b[:-1]
    if not a or not b:
        return [0] * n
    ba = max(abs(int(v)) for v in a).bit_length()
    bb = max(abs(int(v)) for v in b).bit_length()
    signed = any(v < 0 for v in a) or any(v < 0 for v in b)
    bits = ba + bb + min(len(a), len(b)).bit_length() + (1 if signed else 0)
    w = bits // 8 + 1
    count = min(n, len(a) + len(b) - 1)
    prod = _pack(a, w) * _pack(b, w)
    out = _unpack(prod, w, count, signed)
    if mod:
        out = [c % mod for c in out]
    return out + [0] * (n - count)


def mul_int(a, b, n, mod=0, method=None):
    if method is None:
        method = "kronecker" if min(len(a), len(b), n) > KRONECKER_THRESHOLD else "schoolbook"
    if method == "kronecker":
        return mul_kronecker(a, b, n, mod)
    return mul_schoolbook(a, b, n, mod)


def common_denominator(vals):
    d = 1
    for v in vals:
        if isinstance(v, Fraction) and v.denominator != 1:
            d = lcm(d, v.denominator)
    return d


def to_integers(vals):
    """Return (integer list, D) with vals = list / D."""
    d = common_denominator(vals)
    if d == 1:
        return [int(v) for v in vals], 1
    return [int(v * d) for v in vals], d


def mul_rational(a, b, n, method=None):
    ia, da = to_integers(a[:n])
    ib, db = to_integers(b[:n])
    out = mul_int(ia, ib, n, 0, method)
    d = da * db
    if d == 1:
        return [Fraction(c) for c in out]
    return [Fraction(c, d) for c in out]


def mul_exact(a, b, n, method=None):
    """Product of lists mixing ints and Fractions; stays in ints when possible."""
    ia, da = to_integers(a[:n])
    ib, db = to_integers(b[:n])
    out = mul_int(ia, ib, n, 0, method)
    d = da * db
    if d == 1:
        return out
    return [Fraction(c, d) for c in out]
