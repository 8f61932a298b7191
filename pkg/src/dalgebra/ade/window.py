"""Fixed-window polynomial recurrences P(n, c_n, c_{n-1}, ..., c_{n-p}) = 0."""
from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientTerms, NotFound
from ..linalg import multimodular_kernel_vector
from .forms import _compositions


def window_monomials(p, deg_n, deg_c):
    """(n-exponent, c-exponents) pairs; c-degree ascending, then lex-descending."""
    out = []
    for t in range(deg_c + 1):
        for c in _compositions(t, p + 1):
            for a in range(deg_n + 1):
                out.append((a, c))
    return out


def _name(a, c):
    parts = []
    if a:
        parts.append("n" if a == 1 else "n^%d" % a)
    for j, e in enumerate(c):
        if e:
            v = "c[n]" if j == 0 else "c[n-%d]" % j
            parts.append(v if e == 1 else "%s^%d" % (v, e))
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class WindowRecurrence:
    window: int
    degrees: tuple
    monomials: tuple
    coeffs: tuple
    start: int
    info: dict = field(default_factory=dict, compare=False, hash=False)

    def evaluate(self, n, seq):
        total = 0
        for (a, c), k in zip(self.monomials, self.coeffs):
            if not k:
                continue
            v = k * n ** a
            for j, e in enumerate(c):
                if e:
                    v *= seq[n - j] ** e
            total += v
        return total

    def holds(self, seq):
        """First n in [start, len) where the relation fails, or None."""
        for n in range(self.start, len(seq)):
            if self.evaluate(n, seq):
                return n
        return None

    def as_dict(self):
        return {_name(a, c): k for (a, c), k in zip(self.monomials, self.coeffs) if k}

    def pretty(self):
        parts = []
        for (a, c), k in zip(self.monomials, self.coeffs):
            if k:
                parts.append("%d*%s" % (k, _name(a, c)))
        return " + ".join(parts).replace("+ -", "- ") + " = 0"

    __str__ = pretty


def guess_window_recurrence(coeffs, p, degrees, T=10, start=None, max_primes=60):
    """Find a relation among n, c_n, ..., c_{n-p} within the degree caps.

    degrees = (degree in n, total degree in the c's). The linear system uses
    the first U + T admissible indices; any candidate must then hold for every
    n from `start` (default p) to the end of the sequence.
    """
    seq = [int(c) for c in coeffs]
    deg_n, deg_c = degrees
    start = p if start is None else max(start, p)
    mons = window_monomials(p, deg_n, deg_c)
    U = len(mons)
    rows = U + T
    if len(seq) - start < rows:
        raise InsufficientTerms(start + rows, len(seq), "window %d, degrees %s" % (p, degrees))
    idx = list(range(start, start + rows))

    def build(q):
        vals = [c % q for c in seq]
        M = np.zeros((rows, U), dtype=np.int64)
        for r, n in enumerate(idx):
            for col, (a, c) in enumerate(mons):
                v = pow(n, a, q)
                for j, e in enumerate(c):
                    if e:
                        v = v * pow(vals[n - j], e, q) % q
                M[r, col] = v
        return M

    trial = {}

    def verify(vec):
        rec = WindowRecurrence(p, tuple(degrees), tuple(mons), tuple(vec), start)
        bad = rec.holds(seq)
        trial["bad"] = bad
        return bad is None

    vec, info = multimodular_kernel_vector(build, verify, max_primes=max_primes)
    if vec is None:
        if info.get("spurious"):
            raise NotFound("window %d degrees %s: fitted relation fails at n=%s"
                           % (p, tuple(degrees), trial.get("bad")), [info])
        raise NotFound("no relation with window %d and degrees %s given %d terms"
                       % (p, tuple(degrees), len(seq)), [info])
    info.update(unknowns=U, equations=rows, verified_through=len(seq) - 1)
    return WindowRecurrence(p, tuple(degrees), tuple(mons), tuple(vec), start, info)
