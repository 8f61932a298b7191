"""Search shapes (m, k, d) for algebraic differential equations."""
from dataclasses import dataclass
from math import comb


@dataclass(frozen=True, order=True)
class AdeForm:
    m: int
    k: int
    d: int
    homogeneous: bool = False

    def __post_init__(self):
        if self.m < 1 or self.k < 0 or self.d < 0:
            raise ValueError("need m >= 1, k >= 0, d >= 0")

    @property
    def R(self):
        if self.homogeneous:
            return comb(self.m + self.k, self.k)
        return comb(self.m + self.k + 1, self.k + 1)

    @property
    def U(self):
        return self.R * (self.d + 1)

    def required_terms(self, T=10):
        return self.U + self.k + T

    @property
    def terms(self):
        return functional_terms(self)

    def __str__(self):
        return "(%d,%d,%d%s)" % (self.m, self.k, self.d, ",hom" if self.homogeneous else "")


def _compositions(total, parts):
    """Weak compositions of `total` into `parts` parts, lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def functional_terms(form):
    """Exponent tuples (c_0..c_k) of F, F', ..., F^(k), graded then lex-descending.

    (m, k) = (3, 1) gives 1, F, F', F^2, FF', F'^2, F^3, F^2F', FF'^2, F'^3.
    """
    degrees = [form.m] if form.homogeneous else range(form.m + 1)
    out = []
    for t in degrees:
        out.extend(_compositions(t, form.k + 1))
    return out


def unknown_count(form):
    return form.U


def term_name(c):
    parts = []
    for j, e in enumerate(c):
        if not e:
            continue
        base = "F" + "'" * j if j <= 3 else "F^(%d)" % j
        parts.append(base if e == 1 else "%s^%d" % (base if j == 0 else "(%s)" % base, e))
    return "*".join(parts) if parts else "1"


SWEEP_EXCLUSIONS = ("k=0", "m=1", "d=0")


def _parse_exclusions(exclusions):
    if exclusions is True:
        return set(SWEEP_EXCLUSIONS)
    if not exclusions:
        return set()
    out = set(exclusions)
    bad = out - set(SWEEP_EXCLUSIONS)
    if bad:
        raise ValueError("unknown exclusions %s" % sorted(bad))
    return out


def enumerate_forms(N, T=10, exclusions=(), homogeneous=False):
    """Componentwise-maximal (m, k, d) with U + k + T <= N, minus exclusions.

    exclusions is a subset of {"k=0", "m=1", "d=0"} or True for all three:
    k=0 drops purely algebraic forms, m=1 drops linear ones, d=0 drops forms
    whose coefficients are constants. For each (m, k) only the largest
    feasible d can be maximal; survivors are then filtered against each
    other. Exclusions are applied before the maximality filter.
    """
    ex = _parse_exclusions(exclusions)
    dmin = 1 if "d=0" in ex else 0
    if N <= T:
        return []
    cands = []
    k = 0
    while True:
        m_any = False
        m = 1
        while True:
            R = comb(m + k, k) if homogeneous else comb(m + k + 1, k + 1)
            dmax = (N - T - k) // R - 1
            if dmax < dmin:
                break
            m_any = True
            if not (("k=0" in ex and k == 0) or ("m=1" in ex and m == 1)):
                cands.append(AdeForm(m, k, dmax, homogeneous))
            m += 1
        if not m_any:
            break
        k += 1
    maximal = []
    for f in cands:
        dominated = any(g != f and g.m >= f.m and g.k >= f.k and g.d >= f.d for g in cands)
        if not dominated:
            maximal.append(f)
    maximal.sort(key=lambda f: (-f.U, f.k, f.m, f.d))
    return maximal
