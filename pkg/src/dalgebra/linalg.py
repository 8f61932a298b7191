"""Linear algebra over F_p with numpy int64 (p < 2^31), plus multi-modular lifting.

Nullspace vectors are made canonical as follows: among all nonzero kernel
vectors pick the one whose last nonzero position is smallest (it is unique up
to scaling) and scale that entry to 1. Column order therefore encodes the
preference between candidate relations.
"""
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .errors import SolverOverflowBudget
from .ntheory import is_prime, rational_reconstruct

WORD_PRIME_BITS = 31


def rref_mod_p(M, p):
    """Reduced row echelon form of M mod p; returns (R, pivot columns)."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace_mod_p(M, p):
    """Basis of {v : M v = 0 mod p} as rows of an int64 array."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref_mod_p(M, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    piv = np.array(pivots, dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        if len(pivots):
            basis[t, piv] = (-R[:, f]) % p
    return basis


def min_last_vector(basis, p):
    """Kernel vector with the smallest last-nonzero index, that entry scaled to 1.

    Returns (vector, index, kernel dimension) or (None, None, 0).
    """
    if basis.shape[0] == 0:
        return None, None, 0
    rev = basis[:, ::-1]
    R, pivots = rref_mod_p(rev, p)
    # in the reversed order the pivot is the last nonzero of the original
    best = max(range(len(pivots)), key=lambda i: pivots[i])
    vec = R[best][::-1].copy()
    idx = basis.shape[1] - 1 - pivots[best]
    return vec, idx, basis.shape[0]


def word_primes(count=None, bits=WORD_PRIME_BITS, avoid=()):
    """Descending primes below 2^bits (skipping those in `avoid`)."""
    n = (1 << bits) - 1
    found = 0
    while n > 2:
        if n not in avoid and is_prime(n):
            yield n
            found += 1
            if count is not None and found >= count:
                return
        n -= 2 if n % 2 else 1


def crt_pair(r1, m1, r2, m2):
    """x = r1 mod m1, x = r2 mod m2 with coprime moduli; returns x in [0, m1*m2)."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def reconstruct_vector(residues, m):
    """Rational reconstruction of every entry; None on failure."""
    out = []
    for r in residues:
        q = rational_reconstruct(int(r), m)
        if q is None:
            return None
        out.append(q)
    return out


def primitive_integer_vector(vec):
    """Clear denominators, divide by content, make the first nonzero entry positive."""
    vec = [Fraction(v) for v in vec]
    den = 1
    for v in vec:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return ints
    ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return ints


def multimodular_kernel_vector(build, verify, max_primes=40, avoid=(), bits=WORD_PRIME_BITS):
    """Canonical kernel vector over Q of a matrix known only modulo primes.

    build(p) returns the matrix mod p (or None if p is unusable for this
    input, e.g. it divides a denominator). verify(int_vector) certifies a
    candidate exactly. Primes whose kernel shape disagrees with the majority
    are discarded as unlucky. Returns (int_vector, info) or (None, info) when
    the kernel is trivial.
    """
    info = {"primes": 0, "dimension": None, "discarded": 0}
    acc = None
    modulus = 1
    shape = None
    last = None
    rejected = None
    stable = 0
    used = 0
    for p in word_primes(bits=bits, avoid=avoid):
        if used >= max_primes:
            break
        M = build(p)
        if M is None:
            continue
        used += 1
        basis = nullspace_mod_p(M, p)
        vec, idx, dim = min_last_vector(basis, p)
        if vec is None:
            info["primes"] = used
            info["dimension"] = 0
            return None, info
        key = (dim, idx)
        if shape is None or key < shape:
            # smaller kernel or earlier leading index: previous primes were unlucky
            if shape is not None:
                info["discarded"] += 1
            shape = key
            acc, modulus = [int(v) for v in vec], p
            last = None
        elif key != shape:
            info["discarded"] += 1
            continue
        else:
            acc = [crt_pair(a, modulus, int(v), p)[0] for a, v in zip(acc, vec)]
            modulus *= p
        cand = reconstruct_vector(acc, modulus)
        if cand is None:
            continue
        ints = primitive_integer_vector(cand)
        if ints == last:
            stable += 1
            if ints == rejected:
                if stable >= 3:
                    # exact over Q, consistent across primes, yet fails the full check
                    info["primes"] = used
                    info["dimension"] = shape[0]
                    info["spurious"] = True
                    return None, info
                continue
            if verify(ints):
                info["primes"] = used
                info["dimension"] = shape[0]
                return ints, info
            rejected = ints
        else:
            stable = 1
        last = ints
    raise SolverOverflowBudget("no certified kernel vector after %d primes" % used)
